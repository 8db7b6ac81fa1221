//! The twisted Hall algebra over one finite field, with coefficients in
//! `Q(√q)` so that `v = √q` is a number and divided powers are honest.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::One;

use crate::cartan::{euler_form, sym_form};
use crate::error::{Error, Result};
use crate::laurent::{bigint_to_rat, quantum_factorial, rat};
use crate::linalg::Scalar;
use crate::modrep::hallnum::HallTable;
use crate::modrep::Oracle;
use crate::qsqrt::QSqrt;

/// Class id → coefficient.
pub type FieldElement = BTreeMap<usize, QSqrt>;
/// `([M], [N]) → coefficient` for `[M] ⊗ [N]`.
pub type FieldTensor = BTreeMap<(usize, usize), QSqrt>;

pub fn add_term<K: Ord>(x: &mut BTreeMap<K, QSqrt>, k: K, c: QSqrt) {
    if c.is_null() {
        return;
    }
    match x.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_null() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn combine<K: Ord + Clone>(a: &BTreeMap<K, QSqrt>, ca: &QSqrt, b: &BTreeMap<K, QSqrt>, cb: &QSqrt) -> BTreeMap<K, QSqrt> {
    let mut out = BTreeMap::new();
    for (k, c) in a {
        add_term(&mut out, k.clone(), c.mul(ca));
    }
    for (k, c) in b {
        add_term(&mut out, k.clone(), c.mul(cb));
    }
    out
}

pub struct FieldHall {
    pub oracle: Oracle,
    tables: RwLock<HashMap<usize, Arc<HallTable>>>,
    by_dim: HashMap<Vec<usize>, Vec<usize>>,
}

impl FieldHall {
    pub fn new(oracle: Oracle) -> Self {
        let mut by_dim: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (k, c) in oracle.catalog.classes.iter().enumerate() {
            by_dim.entry(c.dims.clone()).or_default().push(k);
        }
        Self { oracle, tables: RwLock::new(HashMap::new()), by_dim }
    }

    pub fn q(&self) -> u32 {
        self.oracle.q()
    }

    pub fn n(&self) -> usize {
        self.oracle.species.n()
    }

    pub fn dims(&self, k: usize) -> &[usize] {
        &self.oracle.catalog.classes[k].dims
    }

    fn idims(&self, k: usize) -> Vec<i64> {
        self.dims(k).iter().map(|&x| x as i64).collect()
    }

    pub fn fq_dim(&self, k: usize) -> i64 {
        self.oracle.species.total_fq_dim(self.dims(k)) as i64
    }

    pub fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        euler_form(&self.oracle.species.quiver, a, b)
    }

    pub fn sym(&self, a: &[i64], b: &[i64]) -> i64 {
        sym_form(&self.oracle.species.quiver, a, b)
    }

    pub fn aut(&self, k: usize) -> BigRational {
        bigint_to_rat(&self.oracle.catalog.classes[k].aut_order)
    }

    pub fn classes_of_dim(&self, d: &[usize]) -> &[usize] {
        self.by_dim.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn table(&self, l: usize) -> Result<Arc<HallTable>> {
        if let Some(t) = self.tables.read().expect("table lock").get(&l) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.oracle.hall_table(l)?);
        self.tables.write().expect("table lock").insert(l, t.clone());
        Ok(t)
    }

    /// Fills the table cache for every class, in parallel.
    pub fn prefetch(&self) -> Result<()> {
        let ls: Vec<usize> = (0..self.oracle.catalog.classes.len()).collect();
        let ts = self.oracle.hall_tables(&ls)?;
        let mut w = self.tables.write().expect("table lock");
        for (l, t) in ls.into_iter().zip(ts) {
            w.insert(l, Arc::new(t));
        }
        Ok(())
    }

    pub fn v_pow(&self, e: i64) -> QSqrt {
        QSqrt::v_pow(self.q(), e)
    }

    pub fn scalar(&self, r: BigRational) -> QSqrt {
        QSqrt::rational(self.q(), r)
    }

    pub fn basis(&self, k: usize) -> FieldElement {
        BTreeMap::from([(k, self.scalar(BigRational::one()))])
    }

    pub fn one(&self) -> FieldElement {
        self.basis(self.oracle.catalog.zero_class())
    }

    pub fn simple(&self, i: usize) -> Result<usize> {
        self.oracle.simple_class(i)
    }

    /// `[S_i]`.
    pub fn u(&self, i: usize) -> Result<FieldElement> {
        Ok(self.basis(self.simple(i)?))
    }

    fn sum_dims(&self, a: usize, b: usize) -> Vec<usize> {
        self.dims(a).iter().zip(self.dims(b)).map(|(x, y)| x + y).collect()
    }

    /// `[M]*[N] = v^{⟨M,N⟩} Σ_L g^L_{MN} [L]`.
    pub fn mult_basis(&self, m: usize, n: usize) -> Result<FieldElement> {
        let d = self.sum_dims(m, n);
        if !crate::modrep::catalog::leq(&d, &self.oracle.catalog.cap) {
            return Err(Error::Budget(format!("product of dimension {d:?} leaves the cap")));
        }
        let tw = self.v_pow(self.euler(&self.idims(m), &self.idims(n)));
        let mut out = FieldElement::new();
        for &l in self.classes_of_dim(&d) {
            if let Some(&g) = self.table(l)?.get(&(m, n)) {
                add_term(&mut out, l, tw.mul(&QSqrt::from_int(self.q(), g as i64)));
            }
        }
        Ok(out)
    }

    pub fn mult(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        let mut out = FieldElement::new();
        for (&m, cm) in x {
            for (&n, cn) in y {
                let c = cm.mul(cn);
                for (l, g) in self.mult_basis(m, n)? {
                    add_term(&mut out, l, c.mul(&g));
                }
            }
        }
        Ok(out)
    }

    /// `⟨M⟩ = v^{−dim M + dim End M} [M]`.
    pub fn angle(&self, k: usize) -> FieldElement {
        let e = self.oracle.catalog.classes[k].end_dim as i64;
        BTreeMap::from([(k, self.v_pow(e - self.fq_dim(k)))])
    }

    pub fn scale(&self, x: &FieldElement, c: &QSqrt) -> FieldElement {
        let mut out = FieldElement::new();
        for (&k, a) in x {
            add_term(&mut out, k, a.mul(c));
        }
        out
    }

    /// `u_i^{(p)} = u_i^p / [p]_{v_i}!`.
    pub fn divided_power(&self, i: usize, p: usize) -> Result<FieldElement> {
        let mut acc = self.one();
        let u = self.u(i)?;
        for _ in 0..p {
            acc = self.mult(&acc, &u)?;
        }
        let d = self.oracle.species.d(i) as i64;
        let f = QSqrt::eval(self.q(), &quantum_factorial(p as i64, d)?);
        Ok(self.scale(&acc, &f.inv().expect("quantum factorial is nonzero")))
    }

    /// `r([L]) = Σ v^{⟨M,N⟩} g^L_{MN} a_M a_N / a_L [M]⊗[N]`.
    pub fn coproduct_basis(&self, l: usize) -> Result<FieldTensor> {
        let mut out = FieldTensor::new();
        let al = self.aut(l);
        for (&(m, n), &g) in self.table(l)?.iter() {
            let c = rat(g as i64) * self.aut(m) * self.aut(n) / &al;
            let tw = self.v_pow(self.euler(&self.idims(m), &self.idims(n)));
            add_term(&mut out, (m, n), tw.mul(&self.scalar(c)));
        }
        Ok(out)
    }

    pub fn coproduct(&self, x: &FieldElement) -> Result<FieldTensor> {
        let mut out = FieldTensor::new();
        for (&l, c) in x {
            for (k, a) in self.coproduct_basis(l)? {
                add_term(&mut out, k, a.mul(c));
            }
        }
        Ok(out)
    }

    /// `r(x) = u_i ⊗ _i r(x) + (terms with other left factors)`.
    pub fn derive_left(&self, i: usize, x: &FieldElement) -> Result<FieldElement> {
        let s = self.simple(i)?;
        let mut out = FieldElement::new();
        for ((m, n), c) in self.coproduct(x)? {
            if m == s {
                add_term(&mut out, n, c);
            }
        }
        Ok(out)
    }

    /// `r(x) = r_i(x) ⊗ u_i + …`.
    pub fn derive_right(&self, i: usize, x: &FieldElement) -> Result<FieldElement> {
        let s = self.simple(i)?;
        let mut out = FieldElement::new();
        for ((m, n), c) in self.coproduct(x)? {
            if n == s {
                add_term(&mut out, m, c);
            }
        }
        Ok(out)
    }

    /// `([M],[M]) = v^{2 dim M} / a_M`, orthogonal on classes.
    pub fn inner_basis(&self, k: usize) -> QSqrt {
        self.v_pow(2 * self.fq_dim(k)).mul(&self.scalar(self.aut(k).recip()))
    }

    pub fn inner(&self, x: &FieldElement, y: &FieldElement) -> QSqrt {
        let mut s = QSqrt::from_int(self.q(), 0);
        for (k, a) in x {
            if let Some(b) = y.get(k) {
                s = s.add(&a.mul(b).mul(&self.inner_basis(*k)));
            }
        }
        s
    }

    /// `(a⊗b, c⊗d) = (a,c)(b,d)`.
    pub fn inner_tensor(&self, x: &FieldTensor, y: &FieldTensor) -> QSqrt {
        let mut s = QSqrt::from_int(self.q(), 0);
        for (&(m, n), a) in x {
            if let Some(b) = y.get(&(m, n)) {
                s = s.add(&a.mul(b).mul(&self.inner_basis(m)).mul(&self.inner_basis(n)));
            }
        }
        s
    }

    pub fn tensor(&self, x: &FieldElement, y: &FieldElement) -> FieldTensor {
        let mut out = FieldTensor::new();
        for (&m, a) in x {
            for (&n, b) in y {
                add_term(&mut out, (m, n), a.mul(b));
            }
        }
        out
    }

    /// `(x₁⊗x₂)(y₁⊗y₂) = v^{(|x₂|,|y₁|)} x₁y₁ ⊗ x₂y₂`.
    pub fn tensor_mult(&self, x: &FieldTensor, y: &FieldTensor) -> Result<FieldTensor> {
        let mut out = FieldTensor::new();
        for (&(x1, x2), a) in x {
            for (&(y1, y2), b) in y {
                let tw = self.v_pow(self.sym(&self.idims(x2), &self.idims(y1)));
                let c = a.mul(b).mul(&tw);
                let left = self.mult_basis(x1, y1)?;
                let right = self.mult_basis(x2, y2)?;
                for (l, p) in &left {
                    for (r, s) in &right {
                        add_term(&mut out, (*l, *r), c.mul(p).mul(s));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ_{p+p'=1−c_ij} (−1)^p u_i^{(p)} u_j u_i^{(p')}`.
    pub fn serre(&self, i: usize, j: usize) -> Result<FieldElement> {
        let c = crate::cartan::cartan_of(&self.oracle.species.quiver).c[i][j];
        let top = (1 - c) as usize;
        let uj = self.u(j)?;
        let mut out = FieldElement::new();
        for p in 0..=top {
            let t = self.mult(&self.mult(&self.divided_power(i, p)?, &uj)?, &self.divided_power(i, top - p)?)?;
            let sign = QSqrt::from_int(self.q(), if p % 2 == 0 { 1 } else { -1 });
            out = combine(&out, &QSqrt::from_int(self.q(), 1), &t, &sign);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::ValuedQuiver;
    use crate::modrep::{CatalogOptions, Species};

    pub(crate) fn field(text: &str, q: u32, cap: &[usize]) -> FieldHall {
        let g = ValuedQuiver::parse(text).unwrap();
        FieldHall::new(Oracle::build(Species::new(&g, q).unwrap(), cap, &CatalogOptions::default()).unwrap())
    }

    const A2: &str = "vertex 1\nvertex 2\narrow a 1 2\n";
    const KRONECKER: &str = "vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n";
    const C2: &str = "vertex 1 d=2\nvertex 2\narrow a 1 2 m=2\n";

    #[test]
    fn a2_products() {
        let h = field(A2, 2, &[1, 1]);
        let (s1, s2) = (h.simple(0).unwrap(), h.simple(1).unwrap());
        let p = h.oracle.catalog.indecs_of_dim(&[1, 1])[0];
        let p = h.oracle.catalog.class_of_indec(p);
        let ss = h.oracle.catalog.class_of_parts(&{
            let mut v = vec![(h.oracle.catalog.classes[s1].parts[0].0, 1), (h.oracle.catalog.classes[s2].parts[0].0, 1)];
            v.sort();
            v
        }).unwrap();
        let x = h.mult_basis(s1, s2).unwrap();
        let vinv = h.v_pow(-1);
        assert_eq!(x, BTreeMap::from([(ss, vinv.clone()), (p, vinv)]));
        assert_eq!(h.mult_basis(s2, s1).unwrap(), h.basis(ss));
        let one = h.one();
        assert_eq!(h.mult(&one, &h.basis(p)).unwrap(), h.basis(p));
        let r = h.coproduct_basis(p).unwrap();
        // a_{S1} a_{S2} / a_P = 1 over F_2
        assert_eq!(r[&(s1, s2)], h.v_pow(-1));
    }

    #[test]
    fn a1_angle_and_divided_power() {
        let h = field("vertex 1\n", 3, &[2]);
        let s = h.simple(0).unwrap();
        let ss = h.oracle.catalog.classes_of_dim(&[2])[0];
        assert_eq!(h.angle(ss)[&ss], h.v_pow(2));
        assert_eq!(h.angle(s), h.basis(s));
        // u^{(2)} = v^{⟨S,S⟩}(q+1)[2S]/(v+v^{-1}) = v^2[2S]
        assert_eq!(h.divided_power(0, 2).unwrap(), h.scale(&h.basis(ss), &h.v_pow(2)));
        let x = h.inner(&h.u(0).unwrap(), &h.u(0).unwrap());
        assert_eq!(x, QSqrt::rational(3, BigRational::new(3.into(), 2.into())));
    }

    #[test]
    fn serre_relations_vanish() {
        for q in [2, 3] {
            for (text, caps) in [(KRONECKER, [[3, 1], [1, 3]]), (C2, [[3, 1], [1, 3]])] {
                for (cap, (i, j)) in caps.iter().zip([(0, 1), (1, 0)]) {
                    let h = field(text, q, cap);
                    assert!(h.serre(i, j).unwrap().is_empty(), "q={q} {text} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn associativity_small() {
        let h = field(KRONECKER, 2, &[2, 2]);
        let classes: Vec<usize> = (0..h.oracle.catalog.classes.len()).filter(|&k| h.fq_dim(k) <= 2).collect();
        for &a in &classes {
            for &b in &classes {
                for &c in &classes {
                    let (x, y, z) = (h.basis(a), h.basis(b), h.basis(c));
                    let s: Vec<usize> = (0..2).map(|t| h.dims(a)[t] + h.dims(b)[t] + h.dims(c)[t]).collect();
                    if s.iter().any(|&t| t > 2) {
                        continue;
                    }
                    let l = h.mult(&h.mult(&x, &y).unwrap(), &z).unwrap();
                    let r = h.mult(&x, &h.mult(&y, &z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn green_and_hopf() {
        let h = field(KRONECKER, 2, &[2, 2]);
        let ks: Vec<usize> = (0..h.oracle.catalog.classes.len()).collect();
        for &a in &ks {
            for &b in &ks {
                let s: Vec<usize> = (0..2).map(|t| h.dims(a)[t] + h.dims(b)[t]).collect();
                if s.iter().any(|&t| t > 2) {
                    continue;
                }
                let (x, y) = (h.basis(a), h.basis(b));
                let lhs = h.coproduct(&h.mult(&x, &y).unwrap()).unwrap();
                let rhs = h.tensor_mult(&h.coproduct(&x).unwrap(), &h.coproduct(&y).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "Green fails at ({a},{b})");
                for &c in h.classes_of_dim(&s) {
                    let z = h.basis(c);
                    let l = h.inner(&z, &h.mult(&x, &y).unwrap());
                    let r = h.inner_tensor(&h.coproduct(&z).unwrap(), &h.tensor(&x, &y));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn derivation_commutation() {
        let h = field(C2, 2, &[2, 2]);
        for i in 0..2 {
            let vi2 = h.v_pow(2 * h.oracle.species.d(i) as i64);
            let ui = h.u(i).unwrap();
            for k in 0..h.oracle.catalog.classes.len() {
                let d = h.dims(k);
                if d[i] + 1 > 2 {
                    continue;
                }
                let x = h.basis(k);
                let lhs = h.derive_left(i, &h.mult(&ui, &x).unwrap()).unwrap();
                let phi_eps = h.mult(&ui, &h.derive_left(i, &x).unwrap()).unwrap();
                let rhs = combine(&phi_eps, &vi2, &x, &QSqrt::from_int(2, 1));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
