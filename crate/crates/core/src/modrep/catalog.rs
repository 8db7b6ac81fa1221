//! Complete lists of isomorphism classes up to a dimension-vector cap.
//!
//! Dimension vectors are processed in increasing order. Decomposable classes
//! are multisets of indecomposables found earlier; the remaining
//! indecomposables of dimension `ν` are searched for until the mass formula
//! `Σ_M 1/|Aut M| = |Rep_ν| / |GL_ν|` balances exactly.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decompose::{decompose_pieces, find_splitter, iso_to_indecomposable, split_by, LocalData, Split};
use super::species::{FiniteModule, Species};
use crate::cartan::ValuedQuiver;
use crate::error::{Error, Result};

pub const CATALOG_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indecomposable {
    pub module: FiniteModule,
    pub end_dim: usize,
    pub residue_degree: usize,
    pub aut_order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    /// `(indecomposable id, multiplicity)`, sorted by id.
    pub parts: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub end_dim: usize,
    pub aut_order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogOptions {
    /// Maximal total `F_q`-dimension of the cap.
    pub budget: usize,
    pub max_samples: usize,
    pub seed: u64,
    /// Where built catalogs are stored; not part of the cache key.
    #[serde(skip)]
    pub cache_dir: Option<std::path::PathBuf>,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        Self { budget: 8, max_samples: 400_000, seed: 1, cache_dir: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub schema: u32,
    pub quiver: ValuedQuiver,
    pub cyclic: bool,
    pub q: u32,
    pub cap: Vec<usize>,
    pub indecs: Vec<Indecomposable>,
    /// `hom[a][b] = dim Hom(X_a, X_b)`.
    pub hom: Vec<Vec<usize>>,
    pub classes: Vec<IsoClass>,
    #[serde(skip)]
    index: HashMap<Vec<(usize, usize)>, usize>,
}

/// Nonzero vectors in the box below `cap`, ordered by total then lexicographically.
pub fn box_dims(cap: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in cap {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=c).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0));
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

pub fn leq(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn q_pow(q: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

/// `|Rep_ν| / |GL_ν|`.
pub fn mass(sp: &Species, nu: &[usize]) -> BigRational {
    let q = sp.q();
    let rep: usize = sp
        .strands
        .iter()
        .map(|s| sp.fq_dim(s.source, nu[s.source]) * sp.fq_dim(s.target, nu[s.target]))
        .sum();
    let mut gl = BigInt::one();
    for (i, &n) in nu.iter().enumerate() {
        let qi = q_pow(q, sp.d(i));
        let top = num_traits::pow(qi.clone(), n);
        for k in 0..n {
            gl *= &top - num_traits::pow(qi.clone(), k);
        }
    }
    BigRational::new(q_pow(q, rep), gl)
}

/// `|Aut M| = q^{dim End} Π_j Π_{t ≤ m_j} (1 − q^{−f_j t})`.
pub fn aut_order(q: u32, indecs: &[Indecomposable], hom: &[Vec<usize>], parts: &[(usize, usize)]) -> (usize, BigInt) {
    let mut end = 0;
    for &(a, ma) in parts {
        for &(b, mb) in parts {
            end += ma * mb * hom[a][b];
        }
    }
    let mut shift = 0;
    let mut prod = BigInt::one();
    for &(a, m) in parts {
        let f = indecs[a].residue_degree;
        for t in 1..=m {
            shift += f * t;
            prod *= q_pow(q, f * t) - 1;
        }
    }
    (end, q_pow(q, end - shift) * prod)
}

/// All multisets of `ids` with dimension vectors summing to `target`.
fn multisets(indecs: &[Indecomposable], ids: &[usize], target: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        indecs: &[Indecomposable],
        ids: &[usize],
        k: usize,
        rem: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rem.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        if k == ids.len() {
            return;
        }
        rec(indecs, ids, k + 1, rem, cur, out);
        let d = &indecs[ids[k]].module.dims;
        let mut m = 0;
        while leq(d, rem) {
            for (r, x) in rem.iter_mut().zip(d) {
                *r -= x;
            }
            m += 1;
            cur.push((ids[k], m));
            rec(indecs, ids, k + 1, rem, cur, out);
            cur.pop();
        }
        for (r, x) in rem.iter_mut().zip(d) {
            *r += m * x;
        }
    }
    let mut out = Vec::new();
    rec(indecs, ids, 0, &mut target.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn module_from_entries(sp: &Species, nu: &[usize], entries: &[u8]) -> FiniteModule {
    let mut m = sp.zero_module(nu);
    let mut k = 0;
    for a in m.maps.iter_mut() {
        let len = a.rows * a.cols;
        a.data.copy_from_slice(&entries[k..k + len]);
        k += len;
    }
    m
}

enum Probe {
    Decomposable,
    Known,
    New(LocalData),
    Uncertified,
}

fn probe(sp: &Species, m: &FiniteModule, known: &[&FiniteModule]) -> Result<Probe> {
    let basis = sp.end_basis(m);
    if let Split::Splitter(_) = find_splitter(sp, m, &basis, false)? {
        return Ok(Probe::Decomposable);
    }
    if known.iter().any(|y| iso_to_indecomposable(sp, m, y)) {
        return Ok(Probe::Known);
    }
    match find_splitter(sp, m, &basis, true) {
        Ok(Split::Splitter(_)) => Ok(Probe::Decomposable),
        Ok(Split::Local(l)) => Ok(Probe::New(l)),
        Ok(Split::Undecided) => unreachable!("exhaustive search decides"),
        Err(Error::Budget(_)) => Ok(Probe::Uncertified),
        Err(e) => Err(e),
    }
}

impl Catalog {
    pub fn build(sp: &Species, cap: &[usize], opts: &CatalogOptions) -> Result<Self> {
        if cap.len() != sp.n() {
            return Err(Error::Domain("cap length differs from vertex count".into()));
        }
        let size = sp.total_fq_dim(cap);
        if size > opts.budget {
            return Err(Error::Budget(format!(
                "cap {cap:?} has total F_q-dimension {size} > budget {}",
                opts.budget
            )));
        }
        let mut cat = Self {
            schema: CATALOG_SCHEMA,
            quiver: sp.quiver.clone(),
            cyclic: sp.cyclic,
            q: sp.q(),
            cap: cap.to_vec(),
            indecs: Vec::new(),
            hom: Vec::new(),
            classes: Vec::new(),
            index: HashMap::new(),
        };
        if sp.cyclic {
            cat.fill_cyclic(sp)?;
        } else {
            cat.fill_by_mass(sp, opts)?;
        }
        cat.reindex();
        Ok(cat)
    }

    fn push_indec(&mut self, sp: &Species, module: FiniteModule, l: LocalData) {
        let id = self.indecs.len();
        for row in self.hom.iter_mut().take(id) {
            row.push(0);
        }
        self.hom.push(vec![0; id + 1]);
        for j in 0..id {
            let y = &self.indecs[j].module;
            self.hom[id][j] = sp.hom_dim(&module, y);
            self.hom[j][id] = sp.hom_dim(y, &module);
        }
        self.hom[id][id] = l.end_dim;
        self.indecs.push(Indecomposable {
            module,
            end_dim: l.end_dim,
            residue_degree: l.residue_degree,
            aut_order: l.aut_order,
        });
    }

    fn push_class(&mut self, parts: Vec<(usize, usize)>, dims: Vec<usize>) {
        let (end_dim, aut_order) = aut_order(self.q, &self.indecs, &self.hom, &parts);
        self.classes.push(IsoClass { parts, dims, end_dim, aut_order });
    }

    fn fill_by_mass(&mut self, sp: &Species, opts: &CatalogOptions) -> Result<()> {
        let q = sp.q();
        self.push_class(Vec::new(), vec![0; sp.n()]);
        for nu in box_dims(&self.cap) {
            let ids: Vec<usize> = (0..self.indecs.len()).filter(|&a| leq(&self.indecs[a].module.dims, &nu)).collect();
            let decs = multisets(&self.indecs, &ids, &nu);
            let mut rem = mass(sp, &nu);
            for p in &decs {
                let (_, a) = aut_order(q, &self.indecs, &self.hom, p);
                rem -= BigRational::new(BigInt::one(), a);
            }
            let first_new = self.indecs.len();
            let entries: usize = sp
                .strands
                .iter()
                .map(|s| sp.fq_dim(s.source, nu[s.source]) * sp.fq_dim(s.target, nu[s.target]))
                .sum();
            let space = (q as u64).checked_pow(entries as u32).filter(|&s| s <= 4096);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((q as u64) << 40) ^ hash_dims(&nu));
            let mut uncertified = 0usize;
            let mut tries = 0usize;
            while rem.is_positive() {
                let pt: Vec<u8> = match space {
                    Some(s) => {
                        if tries as u64 >= s {
                            break;
                        }
                        let mut c = tries as u64;
                        (0..entries)
                            .map(|_| {
                                let r = (c % q as u64) as u8;
                                c /= q as u64;
                                r
                            })
                            .collect()
                    }
                    None => {
                        if tries >= opts.max_samples {
                            break;
                        }
                        (0..entries).map(|_| rng.gen_range(0..q) as u8).collect()
                    }
                };
                tries += 1;
                let m = module_from_entries(sp, &nu, &pt);
                let known: Vec<&FiniteModule> = self.indecs[first_new..].iter().map(|x| &x.module).collect();
                match probe(sp, &m, &known)? {
                    Probe::New(l) => {
                        rem -= BigRational::new(BigInt::one(), l.aut_order.clone());
                        self.push_indec(sp, m, l);
                    }
                    Probe::Uncertified => uncertified += 1,
                    Probe::Decomposable | Probe::Known => {}
                }
            }
            if !rem.is_zero() {
                return Err(if rem.is_negative() {
                    Error::Internal(format!("mass overshoots at {nu:?} over F_{q}"))
                } else {
                    Error::Budget(format!(
                        "indecomposables of dimension {nu:?} over F_{q} not exhausted after {tries} points \
                         ({uncertified} uncertified), missing mass {rem}"
                    ))
                });
            }
            for p in decs {
                self.push_class(p, nu.clone());
            }
            for a in first_new..self.indecs.len() {
                self.push_class(vec![(a, 1)], nu.clone());
            }
        }
        Ok(())
    }

    /// Indecomposables are the segments `[i; l)`, built directly.
    fn fill_cyclic(&mut self, sp: &Species) -> Result<()> {
        let r = sp.n();
        let max_len: usize = self.cap.iter().sum();
        let mut segs = Vec::new();
        for l in 1..=max_len {
            for i in 0..r {
                let m = segment_module(sp, i, l);
                if leq(&m.dims, &self.cap) {
                    segs.push(m);
                }
            }
        }
        for m in segs {
            let basis = sp.end_basis(&m);
            match find_splitter(sp, &m, &basis, true)? {
                Split::Local(l) => self.push_indec(sp, m, l),
                _ => return Err(Error::Internal("segment module is decomposable".into())),
            }
        }
        self.push_class(Vec::new(), vec![0; r]);
        for nu in box_dims(&self.cap) {
            let ids: Vec<usize> = (0..self.indecs.len()).filter(|&a| leq(&self.indecs[a].module.dims, &nu)).collect();
            for p in multisets(&self.indecs, &ids, &nu) {
                self.push_class(p, nu.clone());
            }
        }
        Ok(())
    }

    pub fn reindex(&mut self) {
        self.index = self.classes.iter().enumerate().map(|(k, c)| (c.parts.clone(), k)).collect();
    }

    pub fn class_of_parts(&self, parts: &[(usize, usize)]) -> Option<usize> {
        self.index.get(parts).copied()
    }

    pub fn classes_of_dim(&self, dims: &[usize]) -> Vec<usize> {
        (0..self.classes.len()).filter(|&k| self.classes[k].dims == dims).collect()
    }

    pub fn indecs_of_dim(&self, dims: &[usize]) -> Vec<usize> {
        (0..self.indecs.len()).filter(|&k| self.indecs[k].module.dims == dims).collect()
    }

    /// The class consisting of the single indecomposable `a`.
    pub fn class_of_indec(&self, a: usize) -> usize {
        self.index[&vec![(a, 1)]]
    }

    pub fn zero_class(&self) -> usize {
        self.index[&Vec::new()]
    }

    pub fn class_module(&self, sp: &Species, k: usize) -> FiniteModule {
        let c = &self.classes[k];
        let mut acc = sp.zero_module(&vec![0; sp.n()]);
        for &(a, m) in &c.parts {
            for _ in 0..m {
                acc = sp.direct_sum(&acc, &self.indecs[a].module);
            }
        }
        acc
    }

    /// `dim Hom(M_a, M_b)` for classes, from the indecomposable table.
    pub fn class_hom(&self, a: usize, b: usize) -> usize {
        let mut s = 0;
        for &(x, mx) in &self.classes[a].parts {
            for &(y, my) in &self.classes[b].parts {
                s += mx * my * self.hom[x][y];
            }
        }
        s
    }

    /// Number of classes per dimension vector, for reporting.
    pub fn census(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.dims.clone()).or_insert(0) += 1;
        }
        m
    }
}

fn hash_dims(nu: &[usize]) -> u64 {
    nu.iter().fold(0xcbf29ce484222325u64, |h, &x| (h ^ x as u64).wrapping_mul(0x100000001b3))
}

/// `[i; l)` with top at vertex `i` and arrows `j → j+1`.
pub fn segment_module(sp: &Species, i: usize, l: usize) -> FiniteModule {
    let r = sp.n();
    let mut dims = vec![0; r];
    let mut local = Vec::with_capacity(l);
    for k in 0..l {
        let v = (i + k) % r;
        local.push(dims[v]);
        dims[v] += 1;
    }
    let mut m = sp.zero_module(&dims);
    for k in 0..l.saturating_sub(1) {
        let v = (i + k) % r;
        let h = sp.strands.iter().position(|s| s.source == v).expect("cyclic strand");
        m.maps[h].set(local[k + 1], local[k], 1);
    }
    m
}

/// Classifies arbitrary modules against a catalog, memoizing by matrix data.
pub struct Oracle {
    pub species: Species,
    pub catalog: Catalog,
    cache: RwLock<HashMap<FiniteModule, usize>>,
}

impl Oracle {
    pub fn new(species: Species, mut catalog: Catalog) -> Result<Self> {
        if species.quiver != catalog.quiver || species.q() != catalog.q || species.cyclic != catalog.cyclic {
            return Err(Error::Context("catalog was built for a different species".into()));
        }
        catalog.reindex();
        Ok(Self { species, catalog, cache: RwLock::new(HashMap::new()) })
    }

    pub fn build(species: Species, cap: &[usize], opts: &CatalogOptions) -> Result<Self> {
        let cat = super::cache::load_or_build(&species, cap, opts, opts.cache_dir.as_deref())?;
        Self::new(species, cat)
    }

    pub fn q(&self) -> u32 {
        self.species.q()
    }

    /// Class id of `m`; fails if `m` is outside the catalog.
    pub fn classify(&self, m: &FiniteModule) -> Result<usize> {
        if let Some(&k) = self.cache.read().expect("cache lock").get(m) {
            return Ok(k);
        }
        let sp = &self.species;
        let cat = &self.catalog;
        if !leq(&m.dims, &cat.cap) {
            return Err(Error::Domain(format!("module of dimension {:?} exceeds catalog cap", m.dims)));
        }
        let mut parts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack: Vec<FiniteModule> = decompose_pieces(sp, m, false)?.into_iter().map(|(x, _)| x).collect();
        while let Some(x) = stack.pop() {
            let hit = cat.indecs_of_dim(&x.dims).into_iter().find(|&a| iso_to_indecomposable(sp, &x, &cat.indecs[a].module));
            if let Some(a) = hit {
                *parts.entry(a).or_insert(0) += 1;
                continue;
            }
            let basis = sp.end_basis(&x);
            match find_splitter(sp, &x, &basis, true)? {
                Split::Splitter(s) => {
                    let (a, b) = split_by(sp, &x, &s)?;
                    stack.push(a);
                    stack.push(b);
                }
                _ => {
                    return Err(Error::Internal(format!(
                        "indecomposable of dimension {:?} missing from catalog",
                        x.dims
                    )))
                }
            }
        }
        let key: Vec<(usize, usize)> = parts.into_iter().collect();
        let k = cat
            .class_of_parts(&key)
            .ok_or_else(|| Error::Internal(format!("class {key:?} missing from catalog")))?;
        self.cache.write().expect("cache lock").insert(m.clone(), k);
        Ok(k)
    }

    pub fn class_module(&self, k: usize) -> FiniteModule {
        self.catalog.class_module(&self.species, k)
    }

    pub fn simple_class(&self, i: usize) -> Result<usize> {
        self.classify(&self.species.simple(i))
    }
}

/// Mass check `Σ 1/|Aut M| = |Rep_ν|/|GL_ν|` for every vector of the catalog.
pub fn verify_mass(sp: &Species, cat: &Catalog) -> Result<()> {
    for nu in box_dims(&cat.cap) {
        let mut s = BigRational::zero();
        for k in cat.classes_of_dim(&nu) {
            s += BigRational::new(BigInt::one(), cat.classes[k].aut_order.clone());
        }
        let target = mass(sp, &nu);
        if s != target {
            return Err(Error::Verification(format!("mass at {nu:?}: {s} ≠ {target}")));
        }
    }
    Ok(())
}

/// Brute-force count of nilpotent points, for the cyclic mass check.
pub fn nilpotent_mass(sp: &Species, nu: &[usize]) -> Result<BigRational> {
    let q = sp.q() as u64;
    let entries: usize = sp
        .strands
        .iter()
        .map(|s| sp.fq_dim(s.source, nu[s.source]) * sp.fq_dim(s.target, nu[s.target]))
        .sum();
    let space = q
        .checked_pow(entries as u32)
        .filter(|&s| s <= 1 << 20)
        .ok_or_else(|| Error::Budget("nilpotent point count too large".into()))?;
    let mut count = 0u64;
    for code in 0..space {
        let mut c = code;
        let pt: Vec<u8> = (0..entries)
            .map(|_| {
                let r = (c % q) as u8;
                c /= q;
                r
            })
            .collect();
        if sp.is_nilpotent(&module_from_entries(sp, nu, &pt)) {
            count += 1;
        }
    }
    Ok(BigRational::from_integer(BigInt::from(count)) * mass(sp, nu) / BigRational::from_integer(q_pow(sp.q(), entries)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(text: &str) -> ValuedQuiver {
        ValuedQuiver::parse(text).unwrap()
    }

    #[test]
    fn a1_dim_two() {
        let sp = Species::new(&quiver("vertex 1\n"), 2).unwrap();
        let cat = Catalog::build(&sp, &[2], &CatalogOptions::default()).unwrap();
        assert_eq!(cat.classes_of_dim(&[2]).len(), 1);
        verify_mass(&sp, &cat).unwrap();
    }

    #[test]
    fn a2_dim_one_one() {
        let sp = Species::new(&quiver("vertex 1\nvertex 2\narrow a 1 2\n"), 3).unwrap();
        let cat = Catalog::build(&sp, &[1, 1], &CatalogOptions::default()).unwrap();
        assert_eq!(cat.classes_of_dim(&[1, 1]).len(), 2);
    }

    #[test]
    fn kronecker_dim_one_one() {
        let sp = Species::new(&quiver("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n"), 2).unwrap();
        let cat = Catalog::build(&sp, &[1, 1], &CatalogOptions::default()).unwrap();
        assert_eq!(cat.classes_of_dim(&[1, 1]).len(), 4);
        assert_eq!(cat.indecs_of_dim(&[1, 1]).len(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let sp = Species::new(&quiver("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n"), 2).unwrap();
        let err = Catalog::build(&sp, &[5, 5], &CatalogOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn cyclic_segments() {
        let sp = Species::cyclic(2, 2).unwrap();
        let cat = Catalog::build(&sp, &[2, 2], &CatalogOptions::default()).unwrap();
        // [1;1),[2;1),[1;2),[2;2),[1;3),[2;3),[1;4),[2;4)
        assert_eq!(cat.indecs.len(), 8);
        for nu in [[1usize, 1], [2, 1]] {
            let mut s = BigRational::zero();
            for k in cat.classes_of_dim(&nu) {
                s += BigRational::new(BigInt::one(), cat.classes[k].aut_order.clone());
            }
            assert_eq!(s, nilpotent_mass(&sp, &nu).unwrap());
        }
    }

    #[test]
    fn classify_roundtrip() {
        let sp = Species::new(&quiver("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n"), 3).unwrap();
        let o = Oracle::build(sp, &[2, 2], &CatalogOptions::default()).unwrap();
        for k in 0..o.catalog.classes.len() {
            assert_eq!(o.classify(&o.class_module(k)).unwrap(), k);
        }
    }
}
