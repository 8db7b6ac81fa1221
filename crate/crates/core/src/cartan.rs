//! Quivers, folding by automorphisms, valued quivers, Cartan data, Euler
//! forms, simple reflections, affine detection and the real roots `β_t`
//! attached to a periodic admissible sequence.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::rat;
use crate::linalg;

/// Signed dimension vector indexed by vertex position.
pub type DimVector = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverAutomorphism {
    pub vertex_perm: Vec<usize>,
    pub arrow_perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuedArrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuedQuiver {
    pub names: Vec<String>,
    pub d: Vec<i64>,
    pub arrows: Vec<ValuedArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub c: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

fn topo_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, t) in edges {
        indeg[t] += 1;
    }
    let mut order = Vec::new();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &(s, t) in edges {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let q = Self { vertices, arrows };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for a in &self.arrows {
            if a.source >= n || a.target >= n {
                return Err(Error::Domain(format!("arrow {} has unknown endpoint", a.id)));
            }
            if a.source == a.target {
                return Err(Error::Domain(format!("arrow {} is a loop", a.id)));
            }
        }
        let edges: Vec<_> = self.arrows.iter().map(|a| (a.source, a.target)).collect();
        if topo_order(n, &edges).is_none() {
            return Err(Error::Domain("quiver has an oriented cycle".into()));
        }
        Ok(())
    }

    /// The quiver with every valuation 1.
    pub fn trivially_valued(&self) -> ValuedQuiver {
        ValuedQuiver {
            names: self.vertices.clone(),
            d: vec![1; self.vertices.len()],
            arrows: self
                .arrows
                .iter()
                .map(|a| ValuedArrow { id: a.id.clone(), source: a.source, target: a.target, m: 1 })
                .collect(),
        }
    }
}

impl QuiverAutomorphism {
    pub fn identity(q: &Quiver) -> Self {
        Self {
            vertex_perm: (0..q.vertices.len()).collect(),
            arrow_perm: (0..q.arrows.len()).collect(),
        }
    }

    pub fn check(&self, q: &Quiver) -> Result<()> {
        let is_perm = |p: &[usize], n: usize| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        if !is_perm(&self.vertex_perm, q.vertices.len()) || !is_perm(&self.arrow_perm, q.arrows.len()) {
            return Err(Error::Domain("automorphism is not a pair of permutations".into()));
        }
        for (h, a) in q.arrows.iter().enumerate() {
            let b = &q.arrows[self.arrow_perm[h]];
            if self.vertex_perm[a.source] != b.source || self.vertex_perm[a.target] != b.target {
                return Err(Error::Domain(format!("automorphism does not commute with arrow {}", a.id)));
            }
        }
        Ok(())
    }
}

fn orbits(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = perm[x];
        }
        out.push(orbit);
    }
    out
}

/// Orbit quiver of `(q, a)`: vertex valuations are vertex-orbit sizes,
/// arrow valuations are arrow-orbit sizes.
pub fn fold(q: &Quiver, a: &QuiverAutomorphism) -> Result<ValuedQuiver> {
    q.validate()?;
    a.check(q)?;
    let vorb = orbits(&a.vertex_perm);
    let mut vertex_of = vec![0; q.vertices.len()];
    for (k, o) in vorb.iter().enumerate() {
        for &x in o {
            vertex_of[x] = k;
        }
    }
    let mut arrows = Vec::new();
    for o in orbits(&a.arrow_perm) {
        let h = &q.arrows[o[0]];
        let (s, t) = (vertex_of[h.source], vertex_of[h.target]);
        if s == t {
            return Err(Error::Domain(format!("folding creates a loop at arrow {}", h.id)));
        }
        let id = o.iter().map(|&x| q.arrows[x].id.as_str()).collect::<Vec<_>>().join("+");
        arrows.push(ValuedArrow { id, source: s, target: t, m: o.len() as i64 });
    }
    let names = vorb
        .iter()
        .map(|o| o.iter().map(|&x| q.vertices[x].as_str()).collect::<Vec<_>>().join("+"))
        .collect();
    let g = ValuedQuiver { names, d: vorb.iter().map(|o| o.len() as i64).collect(), arrows };
    g.validate()?;
    Ok(g)
}

impl ValuedQuiver {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for a in &self.arrows {
            if a.source >= n || a.target >= n || a.source == a.target {
                return Err(Error::Domain(format!("bad arrow {}", a.id)));
            }
            let (ds, dt) = (self.d[a.source], self.d[a.target]);
            if a.m <= 0 || a.m % ds != 0 || a.m % dt != 0 {
                return Err(Error::Domain(format!(
                    "valuation m={} of arrow {} is not a common multiple of {} and {}",
                    a.m, a.id, ds, dt
                )));
            }
        }
        if self.d.iter().any(|&x| x <= 0) {
            return Err(Error::Domain("vertex valuations must be positive".into()));
        }
        let edges: Vec<_> = self.arrows.iter().map(|a| (a.source, a.target)).collect();
        if topo_order(n, &edges).is_none() {
            return Err(Error::Domain("valued quiver has an oriented cycle".into()));
        }
        Ok(())
    }

    pub fn simple(&self, i: usize) -> DimVector {
        let mut x = vec![0; self.n()];
        x[i] = 1;
        x
    }

    /// Parses the line format `vertex <id> [d=<int>]` / `arrow <id> <src> <tgt> [m=<int>]`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut d = Vec::new();
        let mut arrows = Vec::new();
        let lookup = |names: &[String], s: &str| -> Result<usize> {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::Parse(format!("unknown vertex `{s}`")))
        };
        let kv = |tok: Option<&&str>, key: &str| -> Result<i64> {
            match tok {
                None => Ok(1),
                Some(t) => t
                    .strip_prefix(key)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("expected {key}<int>, got `{t}`"))),
            }
        };
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "vertex" if toks.len() >= 2 && toks.len() <= 3 => {
                    names.push(toks[1].to_string());
                    d.push(kv(toks.get(2), "d=")?);
                }
                "arrow" if toks.len() >= 4 && toks.len() <= 5 => {
                    arrows.push(ValuedArrow {
                        id: toks[1].to_string(),
                        source: lookup(&names, toks[2])?,
                        target: lookup(&names, toks[3])?,
                        m: kv(toks.get(4), "m=")?,
                    });
                }
                _ => return Err(Error::Parse(format!("line {}: `{line}`", ln + 1))),
            }
        }
        if names.is_empty() {
            return Err(Error::Parse("no vertices".into()));
        }
        let g = Self { names, d, arrows };
        g.validate()?;
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (n, d) in self.names.iter().zip(&self.d) {
            s.push_str(&format!("vertex {n} d={d}\n"));
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "arrow {} {} {} m={}\n",
                a.id, self.names[a.source], self.names[a.target], a.m
            ));
        }
        s
    }

    /// Vertices ordered so that every arrow goes from a smaller to a larger position.
    pub fn source_first_order(&self) -> Vec<usize> {
        let mut order = self.sink_order();
        order.reverse();
        order
    }

    /// Repeatedly removes the smallest-index sink.
    pub fn sink_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut removed = vec![false; n];
        let mut order = Vec::new();
        for _ in 0..n {
            let v = (0..n)
                .find(|&v| {
                    !removed[v]
                        && !self.arrows.iter().any(|a| a.source == v && !removed[a.target])
                })
                .expect("acyclic quiver has a sink");
            removed[v] = true;
            order.push(v);
        }
        order
    }
}

/// `C_ii = 2`, `C_ij = −Σ m_h / d_i` over arrows joining `i` and `j`.
pub fn cartan_of(g: &ValuedQuiver) -> CartanDatum {
    let n = g.n();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for a in &g.arrows {
        let (s, t) = (a.source, a.target);
        c[s][t] -= a.m / g.d[s];
        c[t][s] -= a.m / g.d[t];
    }
    CartanDatum { c, d: g.d.clone() }
}

/// `⟨x,y⟩ = Σ d_i x_i y_i − Σ_h m_h x_{s(h)} y_{t(h)}`.
pub fn euler_form(g: &ValuedQuiver, x: &[i64], y: &[i64]) -> i64 {
    let mut s: i64 = (0..g.n()).map(|i| g.d[i] * x[i] * y[i]).sum();
    for a in &g.arrows {
        s -= a.m * x[a.source] * y[a.target];
    }
    s
}

pub fn sym_form(g: &ValuedQuiver, x: &[i64], y: &[i64]) -> i64 {
    euler_form(g, x, y) + euler_form(g, y, x)
}

impl CartanDatum {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// `(DC)_{ij}`.
    pub fn sym(&self) -> Vec<Vec<i64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.d[i] * self.c[i][j]).collect())
            .collect()
    }

    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let b = self.sym();
        let mut s = 0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                s += x[i] * b[i][j] * y[j];
            }
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let b = self.sym();
        for i in 0..n {
            if self.c[i][i] != 2 || self.d[i] <= 0 {
                return Err(Error::Domain("Cartan diagonal must be 2 with positive d".into()));
            }
            for j in 0..n {
                if i != j && self.c[i][j] > 0 {
                    return Err(Error::Domain("positive off-diagonal Cartan entry".into()));
                }
                if b[i][j] != b[j][i] {
                    return Err(Error::Domain("DC is not symmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Affine iff `DC` is positive semidefinite of corank 1, decided by exact
    /// symmetric elimination with diagonal pivots.
    pub fn is_affine(&self) -> bool {
        psd_corank(&self.sym()) == Some(1)
    }

    /// The primitive positive integer vector spanning the radical of `DC`.
    pub fn min_delta(&self) -> Result<DimVector> {
        if !self.is_affine() {
            return Err(Error::Domain("min_delta requires an affine datum".into()));
        }
        let m: Vec<Vec<BigRational>> =
            self.sym().iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let ns = linalg::nullspace(&m);
        let v = &ns[0];
        let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
        let mut out: Vec<i64> = ints.iter().map(|x| i64::try_from(x / &g).unwrap()).collect();
        if out.iter().any(|&x| x < 0) {
            out.iter_mut().for_each(|x| *x = -*x);
        }
        if out.iter().any(|&x| x <= 0) {
            return Err(Error::Internal("radical vector is not positive".into()));
        }
        Ok(out)
    }
}

/// Corank if positive semidefinite, else `None`.
fn psd_corank(b: &[Vec<i64>]) -> Option<usize> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = b.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    loop {
        if active.is_empty() {
            return Some(n - rank);
        }
        if active.iter().any(|&i| m[i][i].is_negative()) {
            return None;
        }
        let Some(&p) = active.iter().find(|&&i| m[i][i].is_positive()) else {
            let all_zero = active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            return all_zero.then_some(n - rank);
        };
        active.retain(|&i| i != p);
        for &i in &active {
            for &j in &active {
                let t = &m[i][p] * &m[p][j] / &m[p][p];
                m[i][j] -= t;
            }
        }
        rank += 1;
    }
}

/// `s_i(x) = x − (Σ_j C_ij x_j) e_i`.
pub fn reflect(datum: &CartanDatum, i: usize, x: &[i64]) -> DimVector {
    let mut y = x.to_vec();
    let s: i64 = (0..datum.n()).map(|j| datum.c[i][j] * x[j]).sum();
    y[i] -= s;
    y
}

/// A periodic doubly infinite sequence `i_t = base_order[(−t) mod n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSequence {
    pub base_order: Vec<usize>,
}

/// Default verification window, in periods.
pub const REDUCED_WINDOW_PERIODS: i64 = 3;

impl AdmissibleSequence {
    pub fn at(&self, t: i64) -> usize {
        let n = self.base_order.len() as i64;
        self.base_order[(-t).rem_euclid(n) as usize]
    }

    /// Checks that the negative side is a sink sequence and the positive side a
    /// source sequence by simulating reflections of the orientation, and that
    /// every `β_t` in the window is a positive root.
    pub fn verify(&self, g: &ValuedQuiver, periods: i64) -> Result<()> {
        let n = g.n();
        if self.base_order.len() != n {
            return Err(Error::Domain("sequence length differs from vertex count".into()));
        }
        let window = periods * n as i64;
        for (sign, kind) in [(-1i64, "sink"), (1, "source")] {
            let mut arrows: Vec<(usize, usize)> = g.arrows.iter().map(|a| (a.source, a.target)).collect();
            let steps: Vec<i64> = if sign < 0 { (0..window).map(|k| -k).collect() } else { (1..=window).collect() };
            for t in steps {
                let i = self.at(t);
                let bad = if sign < 0 {
                    arrows.iter().any(|&(s, _)| s == i)
                } else {
                    arrows.iter().any(|&(_, tg)| tg == i)
                };
                if bad {
                    return Err(Error::Verification(format!("i_{t} = {i} is not a {kind}")));
                }
                for a in arrows.iter_mut() {
                    if a.0 == i || a.1 == i {
                        *a = (a.1, a.0);
                    }
                }
            }
        }
        let datum = cartan_of(g);
        for t in -window..=window {
            beta(self, &datum, t)?;
        }
        Ok(())
    }
}

/// Periodic extension of the smallest-index-sink topological ordering.
pub fn admissible_of(g: &ValuedQuiver) -> Result<AdmissibleSequence> {
    g.validate()?;
    let seq = AdmissibleSequence { base_order: g.sink_order() };
    seq.verify(g, REDUCED_WINDOW_PERIODS)?;
    Ok(seq)
}

/// `β_t = s_{i_0}⋯s_{i_{t+1}}(e_{i_t})` for `t ≤ 0`, `s_{i_1}⋯s_{i_{t−1}}(e_{i_t})` for `t > 0`.
pub fn beta(seq: &AdmissibleSequence, datum: &CartanDatum, t: i64) -> Result<DimVector> {
    let n = datum.n();
    let mut x = vec![0; n];
    x[seq.at(t)] = 1;
    if t <= 0 {
        for s in (t + 1)..=0 {
            x = reflect(datum, seq.at(s), &x);
        }
    } else {
        for s in (1..t).rev() {
            x = reflect(datum, seq.at(s), &x);
        }
    }
    if x.iter().any(|&c| c < 0) || x.iter().all(|&c| c == 0) {
        return Err(Error::Verification(format!("beta_{t} = {x:?} is not positive")));
    }
    Ok(x)
}

/// Coxeter transformation `Φ = −E^{-1}E^T` of the Euler form, as a rational matrix.
pub fn coxeter_matrix(g: &ValuedQuiver) -> Vec<Vec<BigRational>> {
    let n = g.n();
    let e: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(euler_form(g, &g.simple(i), &g.simple(j)))).collect())
        .collect();
    // Solve E Φ = −E^T column by column.
    let cols: Vec<Vec<BigRational>> = (0..n).map(|j| (0..n).map(|i| e[i][j].clone()).collect()).collect();
    let mut phi = vec![vec![rat(0); n]; n];
    for j in 0..n {
        let target: Vec<BigRational> = (0..n).map(|i| -e[j][i].clone()).collect();
        let x = linalg::solve_in_span(&cols, &target).expect("Euler matrix is unitriangular");
        for i in 0..n {
            phi[i][j] = x[i].clone();
        }
    }
    phi
}

pub fn apply_rational(m: &[Vec<BigRational>], x: &[i64]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, &b)| a * rat(b)).sum())
        .collect()
}

/// Number of arrows (with valuation) per unordered vertex pair, for display.
pub fn arrow_summary(g: &ValuedQuiver) -> BTreeMap<(usize, usize), i64> {
    let mut m = BTreeMap::new();
    for a in &g.arrows {
        *m.entry((a.source, a.target)).or_insert(0) += a.m;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(n: usize, arrows: &[(usize, usize)]) -> Quiver {
        Quiver::new(
            (1..=n).map(|i| i.to_string()).collect(),
            arrows
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| Arrow { id: format!("a{k}"), source: s, target: t })
                .collect(),
        )
        .unwrap()
    }

    fn kronecker() -> ValuedQuiver {
        quiver(2, &[(0, 1), (0, 1)]).trivially_valued()
    }

    #[test]
    fn fold_examples() {
        let k = quiver(2, &[(0, 1), (0, 1)]);
        let g = fold(&k, &QuiverAutomorphism::identity(&k)).unwrap();
        assert_eq!(g.d, vec![1, 1]);
        assert!(g.arrows.iter().all(|a| a.m == 1));
        // A3: 1 -> 2 <- 3, swap 1 and 3
        let a3 = quiver(3, &[(0, 1), (2, 1)]);
        let s = QuiverAutomorphism { vertex_perm: vec![2, 1, 0], arrow_perm: vec![1, 0] };
        let g = fold(&a3, &s).unwrap();
        assert_eq!(g.d, vec![2, 1]);
        assert_eq!(g.arrows.len(), 1);
        assert_eq!(g.arrows[0].m, 2);
        assert_eq!(cartan_of(&g).c, vec![vec![2, -1], vec![-2, 2]]);
        // D4: outer 1,2,3 -> centre 0
        let d4 = quiver(4, &[(1, 0), (2, 0), (3, 0)]);
        let s = QuiverAutomorphism { vertex_perm: vec![0, 2, 3, 1], arrow_perm: vec![1, 2, 0] };
        let g = fold(&d4, &s).unwrap();
        let mut d = g.d.clone();
        d.sort();
        assert_eq!(d, vec![1, 3]);
        assert_eq!(g.arrows[0].m, 3);
    }

    #[test]
    fn fold_rejects_loops() {
        let a2 = quiver(2, &[(0, 1)]);
        let s = QuiverAutomorphism { vertex_perm: vec![1, 0], arrow_perm: vec![0] };
        assert!(fold(&a2, &s).is_err());
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan_of(&kronecker()).c, vec![vec![2, -2], vec![-2, 2]]);
        let a2 = quiver(2, &[(0, 1)]).trivially_valued();
        assert_eq!(cartan_of(&a2).c, vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn euler_examples() {
        let k = kronecker();
        assert_eq!(euler_form(&k, &[1, 0], &[0, 1]), -2);
        assert_eq!(sym_form(&k, &[1, 1], &[1, 1]), 0);
        for i in 0..2 {
            assert_eq!(euler_form(&k, &k.simple(i), &k.simple(i)), k.d[i]);
        }
    }

    #[test]
    fn reflection_examples() {
        let c = cartan_of(&kronecker());
        assert_eq!(reflect(&c, 0, &[1, 0]), vec![-1, 0]);
        assert_eq!(reflect(&c, 1, &[1, 0]), vec![1, 2]);
        assert_eq!(reflect(&c, 0, &[1, 1]), vec![1, 1]);
    }

    #[test]
    fn affine_examples() {
        let c = cartan_of(&kronecker());
        assert!(c.is_affine());
        assert_eq!(c.min_delta().unwrap(), vec![1, 1]);
        let a2 = cartan_of(&quiver(2, &[(0, 1)]).trivially_valued());
        assert!(!a2.is_affine());
        assert!(a2.min_delta().is_err());
        let a2t = cartan_of(&quiver(3, &[(0, 2), (1, 2), (0, 1)]).trivially_valued());
        assert!(a2t.is_affine());
        assert_eq!(a2t.min_delta().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn beta_examples() {
        let k = kronecker();
        let seq = admissible_of(&k).unwrap();
        assert_eq!(seq.base_order, vec![1, 0]);
        let c = cartan_of(&k);
        assert_eq!(beta(&seq, &c, 0).unwrap(), vec![0, 1]);
        assert_eq!(beta(&seq, &c, 1).unwrap(), vec![1, 0]);
        assert_eq!(beta(&seq, &c, -1).unwrap(), vec![1, 2]);
        assert_eq!(beta(&seq, &c, 2).unwrap(), vec![2, 1]);
        let a2t = quiver(3, &[(0, 2), (1, 2), (0, 1)]).trivially_valued();
        assert_eq!(admissible_of(&a2t).unwrap().base_order, vec![2, 1, 0]);
        let a2 = quiver(2, &[(0, 1)]).trivially_valued();
        assert!(admissible_of(&a2).unwrap_err().to_string().contains("not positive"));
    }

    #[test]
    fn parse_roundtrip() {
        let text = "vertex a d=2\nvertex b\narrow x a b m=2\n";
        let g = ValuedQuiver::parse(text).unwrap();
        assert_eq!(g.d, vec![2, 1]);
        assert_eq!(ValuedQuiver::parse(&g.to_text()).unwrap(), g);
        assert!(ValuedQuiver::parse("vertex a\narrow x a b\n").is_err());
        assert!(ValuedQuiver::parse("vertex a d=2\nvertex b\narrow x a b m=3\n").is_err());
    }

    #[test]
    fn coxeter_matches_reflections() {
        // For the sink order (2,1) of the Kronecker quiver, Φ = s_1 s_2 on dims.
        let k = kronecker();
        let phi = coxeter_matrix(&k);
        let c = cartan_of(&k);
        for x in [[1i64, 2], [2, 3], [1, 1]] {
            let via_phi: Vec<i64> = apply_rational(&phi, &x).iter().map(|r| r.to_integer().try_into().unwrap()).collect();
            let via_s = reflect(&c, 0, &reflect(&c, 1, &x));
            assert_eq!(via_phi, via_s);
        }
    }
}
