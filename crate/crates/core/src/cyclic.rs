//! Nilpotent representations of the cyclic quiver `K_r` in multisegment
//! coordinates. Vertices are stored 0-based and printed 1-based; `[i;l)` has
//! top `S_i` and runs along `i → i+1 → ⋯`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall::{HallElement, TypeAlgebra};
use crate::laurent::LaurentPoly;
use crate::modrep::catalog::{box_dims, segment_module};
use crate::modrep::tubes::{Label, TypeKey};
use crate::modrep::{FiniteModule, Species};
use crate::triangular::{bar_matrix, bar_solve, is_involution, is_unitriangular, mat_mul, LMatrix};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multisegment {
    pub r: usize,
    /// `(top, length) → multiplicity`, all multiplicities positive.
    pub parts: BTreeMap<(usize, usize), usize>,
}

/// Letters `(vertex, multiplicity)` standing for `(a S_j)`.
pub type SegWord = Vec<(usize, usize)>;

impl Multisegment {
    pub fn zero(r: usize) -> Self {
        Self { r, parts: BTreeMap::new() }
    }

    pub fn segment(r: usize, i: usize, l: usize) -> Self {
        let mut m = Self::zero(r);
        m.add(i, l, 1);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn get(&self, i: usize, l: usize) -> usize {
        self.parts.get(&(i % self.r, l)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, l: usize, m: usize) {
        if m > 0 && l > 0 {
            *self.parts.entry((i % self.r, l)).or_insert(0) += m;
        }
    }

    pub fn remove(&mut self, i: usize, l: usize, m: usize) {
        let key = (i % self.r, l);
        let e = self.parts.get_mut(&key).expect("segment present");
        *e -= m;
        if *e == 0 {
            self.parts.remove(&key);
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, l), &m) in &o.parts {
            out.add(i, l, m);
        }
        out
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.r];
        for (&(i, l), &m) in &self.parts {
            for k in 0..l {
                d[(i + k) % self.r] += m;
            }
        }
        d
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|(&(_, l), &m)| l * m).sum()
    }

    pub fn max_len(&self) -> usize {
        self.parts.keys().map(|&(_, l)| l).max().unwrap_or(0)
    }

    /// Every length misses some vertex.
    pub fn is_aperiodic(&self) -> bool {
        (1..=self.max_len()).all(|l| (0..self.r).any(|i| self.get(i, l) == 0))
    }

    pub fn module(&self, sp: &Species) -> FiniteModule {
        let mut acc = sp.zero_module(&vec![0; self.r]);
        for (&(i, l), &m) in &self.parts {
            let s = segment_module(sp, i, l);
            for _ in 0..m {
                acc = sp.direct_sum(&acc, &s);
            }
        }
        acc
    }

    pub fn type_key(&self) -> TypeKey {
        TypeKey {
            fixed: self.parts.iter().map(|(&(i, l), &m)| (Label::Tube { tube: 0, top: i, len: l }, m)).collect(),
            homog: Vec::new(),
        }
    }

    pub fn from_type_key(r: usize, key: &TypeKey) -> Option<Self> {
        let mut m = Self::zero(r);
        for (label, mult) in &key.fixed {
            match label {
                Label::Tube { tube: 0, top, len } => m.add(*top, *len, *mult),
                _ => return None,
            }
        }
        key.homog.is_empty().then_some(m)
    }

    /// All multisegments of the given dimension vector.
    pub fn all_of_dim(r: usize, dims: &[usize]) -> Vec<Self> {
        let total: usize = dims.iter().sum();
        let segs: Vec<(usize, usize)> = (1..=total).flat_map(|l| (0..r).map(move |i| (i, l))).collect();
        let mut out = Vec::new();
        fn go(k: usize, segs: &[(usize, usize)], rem: &mut Vec<usize>, cur: &mut Multisegment, out: &mut Vec<Multisegment>) {
            if rem.iter().all(|&x| x == 0) {
                out.push(cur.clone());
                return;
            }
            if k == segs.len() {
                return;
            }
            let (i, l) = segs[k];
            let r = rem.len();
            let mut m = 0;
            loop {
                go(k + 1, segs, rem, cur, out);
                let need = Multisegment::segment(r, i, l).dims();
                if rem.iter().zip(&need).any(|(a, b)| a < b) {
                    break;
                }
                for (a, b) in rem.iter_mut().zip(&need) {
                    *a -= b;
                }
                cur.add(i, l, 1);
                m += 1;
            }
            for t in 0..l {
                rem[(i + t) % r] += m;
            }
            if m > 0 {
                cur.remove(i, l, m);
            }
        }
        go(0, &segs, &mut dims.to_vec(), &mut Self::zero(r), &mut out);
        out.sort();
        out
    }

    /// All multisegments with `|π| ≤ n`.
    pub fn all_up_to(r: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let cap = vec![n; r];
        for d in box_dims(&cap) {
            if d.iter().sum::<usize>() <= n {
                out.extend(Self::all_of_dim(r, &d));
            }
        }
        out
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.r)?;
        for (&(i, l), &m) in &self.parts {
            write!(f, "; {}:{} x{}", i + 1, l, m)?;
        }
        Ok(())
    }
}

impl FromStr for Multisegment {
    type Err = Error;

    /// `r=2; 1:2 x1; 2:1 x3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad multisegment {s:?}"));
        let mut it = s.split(';').map(str::trim);
        let r: usize = it.next().and_then(|h| h.strip_prefix("r=")).and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
        if r == 0 {
            return Err(bad());
        }
        let mut m = Self::zero(r);
        for part in it.filter(|p| !p.is_empty()) {
            let (seg, mult) = match part.split_once(char::is_whitespace) {
                Some((a, b)) => (a, b.trim().strip_prefix('x').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let (i, l) = seg.split_once(':').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let l: usize = l.parse().map_err(|_| bad())?;
            if i == 0 || i > r || l == 0 {
                return Err(bad());
            }
            m.add(i - 1, l, mult);
        }
        Ok(m)
    }
}

/// `[j;1) ⋄ π = π − [j+1;l₀) + [j;l₀+1)`, `l₀` the longest segment at `j+1`.
pub fn diamond_step(j: usize, pi: &Multisegment) -> Multisegment {
    let r = pi.r;
    let next = (j + 1) % r;
    let l0 = pi.parts.keys().filter(|&&(i, _)| i == next).map(|&(_, l)| l).max();
    let mut out = pi.clone();
    match l0 {
        Some(l0) => {
            out.remove(next, l0, 1);
            out.add(j, l0 + 1, 1);
        }
        None => out.add(j, 1, 1),
    }
    out
}

/// Evaluates `(a₁S_{j₁}) ⋄ (a₂S_{j₂}) ⋄ ⋯` from the right.
pub fn diamond_word(r: usize, w: &[(usize, usize)]) -> Multisegment {
    let mut pi = Multisegment::zero(r);
    for &(j, a) in w.iter().rev() {
        for _ in 0..a {
            pi = diamond_step(j % r, &pi);
        }
    }
    pi
}

/// `S_α ⋄ ρ` for a semisimple `S_α`: at each vertex `j` the `α_j` longest
/// segments of `ρ` at `j+1` grow a new top, the rest of `S_α` stays split.
pub fn diamond_layer(alpha: &[usize], rho: &Multisegment) -> Multisegment {
    let r = rho.r;
    let mut out = rho.clone();
    for (j, &a) in alpha.iter().enumerate() {
        let next = (j + 1) % r;
        let mut lens: Vec<usize> = Vec::new();
        for (&(i, l), &m) in rho.parts.iter().rev() {
            if i == next {
                lens.extend(std::iter::repeat_n(l, m));
            }
        }
        for k in 0..a {
            match lens.get(k) {
                Some(&l) => {
                    out.remove(next, l, 1);
                    out.add(j, l + 1, 1);
                }
                None => out.add(j, 1, 1),
            }
        }
    }
    out
}

/// Top layers of `M(π)`, outermost first: `π = top ⋄ rad`.
pub fn layers(pi: &Multisegment) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = pi.clone();
    while !cur.is_zero() {
        let mut top = vec![0; cur.r];
        let mut rad = Multisegment::zero(cur.r);
        for (&(i, l), &m) in &cur.parts {
            top[i] += m;
            rad.add(i + 1, l - 1, m);
        }
        out.push(top);
        cur = rad;
    }
    out
}

/// `π ⋄ ρ`, peeling `π` into semisimple layers.
pub fn diamond(pi: &Multisegment, rho: &Multisegment) -> Multisegment {
    let mut out = rho.clone();
    for layer in layers(pi).iter().rev() {
        out = diamond_layer(layer, &out);
    }
    out
}

/// Peels `a` top letters at vertex `i` (all segments at `i` of length `≥ t`)
/// when that inverts `a` applications of [`diamond_step`].
fn peel(pi: &Multisegment, i: usize, t: usize) -> Option<(usize, Multisegment)> {
    let r = pi.r;
    let next = (i + 1) % r;
    let longest_next = pi.parts.keys().filter(|&&(k, _)| k == next).map(|&(_, l)| l).max().unwrap_or(0);
    if longest_next + 1 > t {
        return None;
    }
    let mut out = pi.clone();
    let mut a = 0;
    for (&(k, l), &m) in &pi.parts {
        if k == i && l >= t {
            out.remove(i, l, m);
            out.add(next, l - 1, m);
            a += m;
        }
    }
    (a > 0).then_some((a, out))
}

fn search_word(pi: &Multisegment, memo: &mut HashMap<Multisegment, Option<SegWord>>) -> Option<SegWord> {
    if pi.is_zero() {
        return Some(Vec::new());
    }
    if let Some(w) = memo.get(pi) {
        return w.clone();
    }
    let r = pi.r;
    let mut best = None;
    'outer: for t in 1..=pi.max_len() {
        for i in 0..r {
            if let Some((a, rest)) = peel(pi, i, t) {
                if r > 1 && !rest.is_aperiodic() {
                    continue;
                }
                if let Some(mut w) = search_word(&rest, memo) {
                    w.insert(0, (i, a));
                    best = Some(w);
                    break 'outer;
                }
            }
        }
    }
    memo.insert(pi.clone(), best.clone());
    best
}

/// A word through aperiodic multisegments with `diamond_word(word_of(π)) = π`.
/// Full top layers are preferred over partial ones.
pub fn word_of(pi: &Multisegment) -> Result<SegWord> {
    if !pi.is_aperiodic() {
        return Err(Error::Domain(format!("{pi} is not aperiodic")));
    }
    let w = search_word(pi, &mut HashMap::new())
        .ok_or_else(|| Error::Internal(format!("no aperiodic word for {pi}")))?;
    debug_assert_eq!(diamond_word(pi.r, &w), *pi);
    Ok(w)
}

/// `η([i;l)) = [i;l) + [i+r;l)` into rank `2r`.
pub fn eta_fold(pi: &Multisegment) -> Multisegment {
    let mut out = Multisegment::zero(2 * pi.r);
    for (&(i, l), &m) in &pi.parts {
        out.add(i, l, m);
        out.add(i + pi.r, l, m);
    }
    out
}

type HomKey = (usize, usize, usize, usize, usize);

fn hom_cache() -> &'static Mutex<HashMap<HomKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<HomKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `dim Hom([i;l), [j;m))`, solved over `F₂` and `F₃` and required to agree.
pub fn hom_segments(r: usize, i: usize, l: usize, j: usize, m: usize) -> Result<usize> {
    let key = (r, i % r, l, j % r, m);
    if let Some(&h) = hom_cache().lock().expect("hom cache").get(&key) {
        return Ok(h);
    }
    let mut dims = Vec::new();
    for q in [2, 3] {
        let sp = Species::cyclic(r, q)?;
        dims.push(sp.hom_dim(&segment_module(&sp, key.1, l), &segment_module(&sp, key.3, m)));
    }
    if dims[0] != dims[1] {
        return Err(Error::Internal(format!("hom([{i};{l}), [{j};{m})) depends on the field: {dims:?}")));
    }
    hom_cache().lock().expect("hom cache").insert(key, dims[0]);
    Ok(dims[0])
}

pub fn hom_dim_ms(a: &Multisegment, b: &Multisegment) -> Result<usize> {
    let mut s = 0;
    for (&(i, l), &x) in &a.parts {
        for (&(j, m), &y) in &b.parts {
            s += x * y * hom_segments(a.r, i, l, j, m)?;
        }
    }
    Ok(s)
}

fn hom_profile(pi: &Multisegment, n: usize) -> Result<Vec<usize>> {
    let mut p = Vec::new();
    for l in 1..=n {
        for i in 0..pi.r {
            p.push(hom_dim_ms(&Multisegment::segment(pi.r, i, l), pi)?);
        }
    }
    Ok(p)
}

/// `π ≤_G π'`: same dimension and at least as many maps from every segment.
pub fn leq_g(a: &Multisegment, b: &Multisegment) -> Result<bool> {
    if a.r != b.r || a.dims() != b.dims() {
        return Ok(false);
    }
    let n = a.size();
    let (pa, pb) = (hom_profile(a, n)?, hom_profile(b, n)?);
    Ok(pa.iter().zip(&pb).all(|(x, y)| x >= y))
}

pub fn lt_g(a: &Multisegment, b: &Multisegment) -> Result<bool> {
    Ok(a != b && leq_g(a, b)?)
}

/// Multisegments of one dimension vector, listed so that `<_G` only goes forward.
pub fn g_sorted(r: usize, dims: &[usize]) -> Result<Vec<Multisegment>> {
    let all = Multisegment::all_of_dim(r, dims);
    let n: usize = dims.iter().sum();
    let mut keyed = Vec::with_capacity(all.len());
    for m in all {
        let s: usize = hom_profile(&m, n)?.iter().sum();
        keyed.push((std::cmp::Reverse(s), m));
    }
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, m)| m).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicSlice {
    pub dims: Vec<usize>,
    /// All multisegments of this dimension, `<_G`-increasing.
    pub all: Vec<Multisegment>,
    /// Positions in `all` of the aperiodic ones.
    pub aperiodic: Vec<usize>,
    pub words: Vec<SegWord>,
    /// Per aperiodic `π`: `⟨M(π')⟩`-coordinates of `m(π)`, `E_π`, `B(π)` (indexed by `all`).
    pub monomial: Vec<Vec<LaurentPoly>>,
    pub pbw: Vec<Vec<LaurentPoly>>,
    pub canonical: Vec<Vec<LaurentPoly>>,
    /// Bar involution and bar-solve output in the `E` basis (aperiodic order).
    pub bar: LMatrix,
    pub g: LMatrix,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CyclicReport {
    pub slices: usize,
    pub elements: usize,
    pub bar_invariant: bool,
    pub unitriangular: bool,
    pub negative_off_diagonal: bool,
    pub integral: bool,
    pub failures: Vec<String>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.bar_invariant && self.unitriangular && self.negative_off_diagonal && self.failures.is_empty()
    }
}

fn angle_coords(h: &TypeAlgebra, all: &[Multisegment], x: &HallElement) -> Result<Vec<LaurentPoly>> {
    let pos: HashMap<&Multisegment, usize> = all.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut out = vec![LaurentPoly::zero(); all.len()];
    for (&t, c) in &x.coords {
        let ti = &h.types[t];
        let m = Multisegment::from_type_key(all[0].r, &ti.key)
            .ok_or_else(|| Error::Internal(format!("type {:?} is not a multisegment", ti.key)))?;
        let k = *pos.get(&m).ok_or_else(|| Error::Internal(format!("{m} missing from slice")))?;
        out[k] = c.shift(ti.fq_dim - ti.end_dim);
    }
    Ok(out)
}

fn lin_comb(terms: &[(&Vec<LaurentPoly>, LaurentPoly)], n: usize) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(); n];
    for (v, c) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            if !x.is_zero() {
                *o += &(x * c);
            }
        }
    }
    out
}

/// `m(π) = Π u_j^{(a)}` along the word.
pub fn monomial(h: &TypeAlgebra, w: &SegWord) -> Result<HallElement> {
    let mut acc = h.one();
    for &(j, a) in w {
        acc = h.mult(&acc, &h.divided_power(j, a)?)?;
    }
    Ok(acc)
}

impl CyclicSlice {
    pub fn build(h: &TypeAlgebra, dims: &[usize]) -> Result<Self> {
        let r = h.n();
        let all = g_sorted(r, dims)?;
        let n = all.len();
        let aperiodic: Vec<usize> = (0..n).filter(|&k| all[k].is_aperiodic()).collect();
        let words: Vec<SegWord> = aperiodic.iter().map(|&k| word_of(&all[k])).collect::<Result<_>>()?;
        let mut monomial_c = Vec::new();
        for w in &words {
            monomial_c.push(angle_coords(h, &all, &monomial(h, w)?)?);
        }
        let lower = |y: usize, x: usize| -> Result<bool> { lt_g(&all[y], &all[x]) };
        for (a, &k) in aperiodic.iter().enumerate() {
            let m = &monomial_c[a];
            if !m[k].is_one() {
                return Err(Error::Verification(format!("m({}) has leading coefficient {}", all[k], m[k])));
            }
            for y in 0..n {
                if y != k && !m[y].is_zero() && !lower(y, k)? {
                    return Err(Error::Verification(format!("m({}) has support at {} not below it", all[k], all[y])));
                }
            }
        }
        // E_π: clear the other aperiodic coordinates of m(π), lowest first.
        let na = aperiodic.len();
        let mut pbw: Vec<Vec<LaurentPoly>> = Vec::with_capacity(na);
        let mut coeffs: Vec<Vec<LaurentPoly>> = Vec::with_capacity(na);
        for a in 0..na {
            let mut e = monomial_c[a].clone();
            let mut c = vec![LaurentPoly::zero(); na];
            for b in (0..a).rev() {
                let cb = e[aperiodic[b]].clone();
                if cb.is_zero() {
                    continue;
                }
                e = lin_comb(&[(&e, LaurentPoly::one()), (&pbw[b], -cb.clone())], n);
                c[b] = cb;
            }
            pbw.push(e);
            coeffs.push(c);
        }
        // bar(E_a) = m_a − Σ bar(c_ab) bar(E_b) in the E basis.
        let mut bar: LMatrix = vec![vec![LaurentPoly::zero(); na]; na];
        for a in 0..na {
            let mut col = vec![LaurentPoly::zero(); na];
            col[a] = LaurentPoly::one();
            for b in 0..a {
                col[b] += &coeffs[a][b];
            }
            for b in 0..a {
                if coeffs[a][b].is_zero() {
                    continue;
                }
                let cb = coeffs[a][b].bar();
                for y in 0..=b {
                    if !bar[y][b].is_zero() {
                        col[y] -= &(&cb * &bar[y][b]);
                    }
                }
            }
            for y in 0..na {
                bar[y][a] = col[y].clone();
            }
        }
        if !is_involution(&bar) {
            return Err(Error::Verification(format!("bar on E at {dims:?} is not an involution")));
        }
        let g = bar_solve(&bar)?;
        let mut canonical = Vec::with_capacity(na);
        for a in 0..na {
            let terms: Vec<(&Vec<LaurentPoly>, LaurentPoly)> = (0..=a).map(|b| (&pbw[b], g[b][a].clone())).collect();
            canonical.push(lin_comb(&terms, n));
        }
        Ok(Self { dims: dims.to_vec(), all, aperiodic, words, monomial: monomial_c, pbw, canonical, bar, g })
    }

    /// Checks the slice and folds the outcome into `rep`.
    pub fn check(&self, rep: &mut CyclicReport) -> Result<()> {
        let na = self.aperiodic.len();
        rep.slices += 1;
        rep.elements += na;
        // bar(C) = C in the E basis: R·bar(G) = G
        if mat_mul(&self.bar, &bar_matrix(&self.g)) != self.g {
            rep.bar_invariant = false;
            rep.failures.push(format!("bar(B) ≠ B at {:?}", self.dims));
        }
        if !is_unitriangular(&self.g) {
            rep.unitriangular = false;
        }
        for (a, &k) in self.aperiodic.iter().enumerate() {
            let b = &self.canonical[a];
            if !b[k].is_one() {
                rep.unitriangular = false;
                rep.failures.push(format!("B({}) has diagonal {}", self.all[k], b[k]));
            }
            for (y, c) in b.iter().enumerate() {
                if y == k || c.is_zero() {
                    continue;
                }
                if !lt_g(&self.all[y], &self.all[k])? {
                    rep.unitriangular = false;
                    rep.failures.push(format!("B({}) meets {} outside <_G", self.all[k], self.all[y]));
                }
                if !c.in_negative_part() {
                    rep.negative_off_diagonal = false;
                    rep.failures.push(format!("B({}) at {}: {c}", self.all[k], self.all[y]));
                }
                if !c.is_integral() {
                    rep.integral = false;
                }
            }
        }
        Ok(())
    }
}

/// Builds every slice with dimension vector `≤ cap` and checks it.
pub fn canonical_cyclic(h: &TypeAlgebra, cap: &[usize]) -> Result<(Vec<CyclicSlice>, CyclicReport)> {
    let mut rep = CyclicReport { bar_invariant: true, unitriangular: true, negative_off_diagonal: true, integral: true, ..Default::default() };
    let mut slices = Vec::new();
    for d in box_dims(cap) {
        let s = CyclicSlice::build(h, &d)?;
        s.check(&mut rep)?;
        slices.push(s);
    }
    Ok((slices, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Context;
    use crate::hall::FitOptions;
    use crate::modrep::{CatalogOptions, Oracle};

    fn ms(s: &str) -> Multisegment {
        s.parse().unwrap()
    }

    #[test]
    fn aperiodicity() {
        assert!(ms("r=2; 1:2").is_aperiodic());
        assert!(!ms("r=2; 1:1; 2:1").is_aperiodic());
        assert!(ms("r=3; 1:1; 2:1").is_aperiodic());
        assert_eq!(ms("r=2; 1:2 x1; 2:1 x3").to_string(), "r=2; 1:2 x1; 2:1 x3");
        assert!("r=2; 3:1".parse::<Multisegment>().is_err());
    }

    #[test]
    fn diamond_examples() {
        let z = Multisegment::zero(2);
        assert_eq!(diamond_step(0, &z), ms("r=2; 1:1"));
        assert_eq!(diamond_step(0, &ms("r=2; 2:1")), ms("r=2; 1:2"));
        assert_eq!(diamond_step(1, &ms("r=2; 1:1")), ms("r=2; 2:2"));
        assert_eq!(word_of(&ms("r=2; 1:1")).unwrap(), vec![(0, 1)]);
        assert_eq!(word_of(&ms("r=2; 1:2")).unwrap(), vec![(0, 1), (1, 1)]);
        let w = word_of(&ms("r=2; 1:2; 1:1")).unwrap();
        assert_eq!(diamond_word(2, &w), ms("r=2; 1:2; 1:1"));
        assert!(word_of(&ms("r=2; 1:1; 2:1")).is_err());
    }

    #[test]
    fn layers_agree_with_steps() {
        for pi in Multisegment::all_up_to(3, 5) {
            assert_eq!(diamond(&pi, &Multisegment::zero(3)), pi);
            for j in 0..3 {
                let mut e = vec![0; 3];
                e[j] = 1;
                assert_eq!(diamond_layer(&e, &pi), diamond_step(j, &pi));
            }
        }
    }

    #[test]
    fn words_round_trip() {
        for r in [2, 3] {
            for pi in Multisegment::all_up_to(r, 6) {
                if pi.is_aperiodic() {
                    let w = word_of(&pi).unwrap();
                    assert_eq!(diamond_word(r, &w), pi);
                }
            }
        }
    }

    #[test]
    fn hom_examples() {
        assert_eq!(hom_dim_ms(&ms("r=2; 1:1"), &ms("r=2; 1:1")).unwrap(), 1);
        assert_eq!(hom_dim_ms(&ms("r=2; 1:1"), &ms("r=2; 2:1")).unwrap(), 0);
        assert_eq!(hom_dim_ms(&ms("r=2; 1:2"), &ms("r=2; 1:2")).unwrap(), 1);
        assert_eq!(hom_dim_ms(&ms("r=2; 1:1; 2:1"), &ms("r=2; 1:2")).unwrap(), 1);
        // the semisimple module is the degenerate one
        assert!(leq_g(&ms("r=2; 1:1; 2:1"), &ms("r=2; 1:2")).unwrap());
        assert!(!leq_g(&ms("r=2; 1:2"), &ms("r=2; 1:1; 2:1")).unwrap());
        assert!(!leq_g(&ms("r=2; 1:1"), &ms("r=2; 2:1")).unwrap());
    }

    #[test]
    fn diamond_is_generic_extension() {
        let o = Oracle::build(Species::cyclic(2, 2).unwrap(), &[2, 2], &CatalogOptions::default()).unwrap();
        let all = Multisegment::all_up_to(2, 4);
        for a in &all {
            for b in &all {
                if a.size() + b.size() > 4 || a.is_zero() || b.is_zero() {
                    continue;
                }
                let d: Vec<usize> = a.dims().iter().zip(b.dims()).map(|(x, y)| x + y).collect();
                if d.iter().any(|&x| x > 2) {
                    continue;
                }
                let top = diamond(a, b);
                let (ka, kb) = (o.classify(&a.module(&o.species)).unwrap(), o.classify(&b.module(&o.species)).unwrap());
                for c in Multisegment::all_of_dim(2, &d) {
                    let kc = o.classify(&c.module(&o.species)).unwrap();
                    let g = o.hall_number(kc, ka, kb).unwrap();
                    if c == top {
                        assert!(g > 0, "{a} ⋄ {b} = {top} has no Hall number");
                    } else if g > 0 {
                        assert!(lt_g(&c, &top).unwrap(), "{c} appears in {a}*{b} above {top}");
                    }
                }
            }
        }
    }

    #[test]
    fn eta_respects_diamond() {
        assert_eq!(eta_fold(&ms("r=2; 1:1")), ms("r=4; 1:1; 3:1"));
        assert!(eta_fold(&Multisegment::zero(2)).is_zero());
        let all: Vec<Multisegment> = Multisegment::all_up_to(2, 5).into_iter().filter(|m| m.is_aperiodic()).collect();
        for a in &all {
            for b in &all {
                if a.size() + b.size() <= 5 {
                    let lhs = eta_fold(&diamond(a, b));
                    let rhs = diamond(&eta_fold(a), &eta_fold(b));
                    assert_eq!(lhs, rhs, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn canonical_rank_two() {
        let h = TypeAlgebra::build(&Context::Cyclic(2), &[2, 2], FitOptions::default()).unwrap();
        let (slices, rep) = canonical_cyclic(&h, &[2, 2]).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        let s11 = slices.iter().find(|s| s.dims == vec![1, 1]).unwrap();
        // B([1;2)) = ⟨[1;2)⟩ + v^{-1}⟨S₁⊕S₂⟩
        let k = s11.all.iter().position(|m| *m == ms("r=2; 1:2")).unwrap();
        let a = s11.aperiodic.iter().position(|&x| x == k).unwrap();
        let ss = s11.all.iter().position(|m| *m == ms("r=2; 1:1; 2:1")).unwrap();
        assert_eq!(s11.canonical[a][ss], LaurentPoly::v_pow(-1));
    }
}
