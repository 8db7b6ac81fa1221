//! The generic Hall algebra in type coordinates: `[[τ]] = Σ_{M of type τ} [M]`
//! with structure constants fitted as polynomials in `q` and then written in
//! `v` via `q = v²`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{FieldElement, FieldHall};
use super::poly::{HallPolynomial, DEFAULT_FIT, DEFAULT_HELD_OUT};
use crate::cartan::euler_form;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::laurent::{bigint_to_rat, quantum_factorial, rat, LaurentPoly, RationalV};
use crate::modrep::catalog::leq;
use crate::modrep::tubes::{Label, TubeStructure, TypeKey};
use crate::modrep::{CatalogOptions, Oracle};
use crate::qsqrt::QSqrt;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitOptions {
    pub fit: Vec<u32>,
    pub held_out: Vec<u32>,
    pub catalog: CatalogOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { fit: DEFAULT_FIT.to_vec(), held_out: DEFAULT_HELD_OUT.to_vec(), catalog: CatalogOptions::default() }
    }
}

/// `(vertex, type) → [(type, coefficient)]`.
type DerivTable = HashMap<(usize, usize), Vec<(usize, LaurentPoly)>>;

/// Per-field data aggregated by type.
pub struct FieldData {
    pub hall: FieldHall,
    pub tubes: TubeStructure,
    pub class_type: Vec<TypeKey>,
    pub members: BTreeMap<TypeKey, Vec<usize>>,
    prod: HashMap<(TypeKey, TypeKey, TypeKey), BigRational>,
    /// `(i, τ, σ) → Σ_{L∈τ} g^L_{S_i N} a_{S_i} a_N q^{hom(S_i,N)} / a_L` for any `N ∈ σ`.
    dleft: HashMap<(usize, TypeKey, TypeKey), BigRational>,
    dright: HashMap<(usize, TypeKey, TypeKey), BigRational>,
}

impl FieldData {
    pub fn build(ctx: &Context, q: u32, cap: &[usize], opts: &CatalogOptions) -> Result<Self> {
        let oracle = Oracle::build(ctx.species(q)?, cap, opts)?;
        let tubes = TubeStructure::build(&oracle)?;
        let hall = FieldHall::new(oracle);
        hall.prefetch()?;
        let cat = &hall.oracle.catalog;
        let class_type: Vec<TypeKey> = (0..cat.classes.len()).map(|k| tubes.type_of(cat, k)).collect();
        let mut members: BTreeMap<TypeKey, Vec<usize>> = BTreeMap::new();
        for (k, t) in class_type.iter().enumerate() {
            members.entry(t.clone()).or_default().push(k);
        }
        let simples: Vec<usize> = (0..ctx.n()).map(|i| hall.simple(i)).collect::<Result<_>>()?;
        let mut prod = HashMap::new();
        let mut left: HashMap<usize, BTreeMap<(usize, TypeKey), BigRational>> = HashMap::new();
        let mut right: HashMap<usize, BTreeMap<(usize, TypeKey), BigRational>> = HashMap::new();
        let qr = rat(q as i64);
        for (tau, ls) in &members {
            let mut reference: Option<BTreeMap<(TypeKey, TypeKey), u64>> = None;
            for &l in ls {
                let table = hall.table(l)?;
                let mut agg: BTreeMap<(TypeKey, TypeKey), u64> = BTreeMap::new();
                let al = hall.aut(l);
                for (&(m, n), &g) in table.iter() {
                    *agg.entry((class_type[m].clone(), class_type[n].clone())).or_insert(0) += g;
                    let base = rat(g as i64) * hall.aut(m) * hall.aut(n) / &al;
                    let hq = qr.pow(cat.class_hom(m, n) as i32);
                    if let Some(i) = simples.iter().position(|&s| s == m) {
                        *left.entry(n).or_default().entry((i, tau.clone())).or_insert_with(BigRational::zero) += &base * &hq;
                    }
                    if let Some(i) = simples.iter().position(|&s| s == n) {
                        *right.entry(m).or_default().entry((i, tau.clone())).or_insert_with(BigRational::zero) += &base * &hq;
                    }
                }
                match &reference {
                    None => reference = Some(agg),
                    Some(r) if *r != agg => {
                        return Err(Error::Verification(format!("Hall numbers are not uniform on type {tau:?} over F_{q}")))
                    }
                    _ => {}
                }
            }
            for ((t1, t2), g) in reference.unwrap_or_default() {
                prod.insert((t1, t2, tau.clone()), rat(g as i64));
            }
        }
        let uniform = |acc: HashMap<usize, BTreeMap<(usize, TypeKey), BigRational>>| -> Result<HashMap<(usize, TypeKey, TypeKey), BigRational>> {
            let mut out = HashMap::new();
            for (sigma, ns) in &members {
                let empty = BTreeMap::new();
                let first = acc.get(&ns[0]).unwrap_or(&empty);
                for &n in &ns[1..] {
                    if acc.get(&n).unwrap_or(&empty) != first {
                        return Err(Error::Verification(format!("derivation not uniform on type {sigma:?} over F_{q}")));
                    }
                }
                for ((i, tau), e) in first {
                    if !e.is_integer() {
                        return Err(Error::Verification(format!("extension count {e} is not an integer")));
                    }
                    out.insert((*i, tau.clone(), sigma.clone()), e.clone());
                }
            }
            Ok(out)
        };
        let dleft = uniform(left)?;
        let dright = uniform(right)?;
        Ok(Self { hall, tubes, class_type, members, prod, dleft, dright })
    }

    pub fn count(&self, t: &TypeKey) -> usize {
        self.members.get(t).map_or(0, |v| v.len())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeInfo {
    pub key: TypeKey,
    pub dims: Vec<usize>,
    pub fq_dim: i64,
    pub end_dim: i64,
    /// Number of isoclasses of this type.
    pub count: HallPolynomial,
    /// `a_τ` as a Laurent polynomial in `v`.
    pub aut: LaurentPoly,
    pub homogeneous: bool,
}

/// `grading` plus type id → coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallElement {
    pub grading: Vec<usize>,
    pub coords: BTreeMap<usize, LaurentPoly>,
}

impl HallElement {
    pub fn zero(grading: Vec<usize>) -> Self {
        Self { grading, coords: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, k: usize, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(k).or_insert_with(LaurentPoly::zero);
        *e += &c;
        if e.is_zero() {
            self.coords.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, &LaurentPoly::one())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, &LaurentPoly::from_int(-1))
    }

    /// `self + c·o`.
    pub fn combine(&self, o: &Self, c: &LaurentPoly) -> Result<Self> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if !self.is_zero() && self.grading != o.grading {
            return Err(Error::Domain(format!("adding gradings {:?} and {:?}", self.grading, o.grading)));
        }
        let mut out = Self { grading: o.grading.clone(), coords: self.coords.clone() };
        for (&k, a) in &o.coords {
            out.add_term(k, a * c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.grading.clone());
        for (&k, a) in &self.coords {
            out.add_term(k, a * c);
        }
        out
    }

    pub fn coeff(&self, k: usize) -> LaurentPoly {
        self.coords.get(&k).cloned().unwrap_or_else(LaurentPoly::zero)
    }
}

pub struct TypeAlgebra {
    pub context: Context,
    pub cap: Vec<usize>,
    pub options: FitOptions,
    pub fields: BTreeMap<u32, FieldData>,
    pub types: Vec<TypeInfo>,
    index: HashMap<TypeKey, usize>,
    by_dim: BTreeMap<Vec<usize>, Vec<usize>>,
    prod: HashMap<(usize, usize), Vec<(usize, LaurentPoly)>>,
    dleft: HashMap<(usize, usize), Vec<(usize, LaurentPoly)>>,
    dright: HashMap<(usize, usize), Vec<(usize, LaurentPoly)>>,
    simples: Vec<usize>,
    zero: usize,
}

fn fit_key<F>(fields: &mut BTreeMap<u32, FieldData>, build: &F, opts: &FitOptions, get: impl Fn(&FieldData) -> BigRational) -> Result<HallPolynomial>
where
    F: Fn(u32) -> Result<FieldData>,
{
    HallPolynomial::fit(
        |q| {
            if let std::collections::btree_map::Entry::Vacant(e) = fields.entry(q) {
                e.insert(build(q)?);
            }
            Ok(get(&fields[&q]))
        },
        &opts.fit,
        &opts.held_out,
    )
}

impl TypeAlgebra {
    pub fn build(context: &Context, cap: &[usize], options: FitOptions) -> Result<Self> {
        if options.fit.len() < 2 {
            return Err(Error::Domain("fitting needs at least two fields".into()));
        }
        let build = |q: u32| FieldData::build(context, q, cap, &options.catalog);
        let first: Vec<u32> = options.fit.iter().chain(options.held_out.first()).copied().collect();
        let built: Vec<(u32, FieldData)> =
            first.par_iter().map(|&q| build(q).map(|f| (q, f))).collect::<Result<_>>()?;
        let mut fields: BTreeMap<u32, FieldData> = built.into_iter().collect();

        let mut keys: BTreeMap<TypeKey, (Vec<usize>, i64, i64, LaurentPoly)> = BTreeMap::new();
        for f in fields.values() {
            let cat = &f.hall.oracle.catalog;
            for (t, ks) in &f.members {
                let k = ks[0];
                let c = &cat.classes[k];
                let mut aut = LaurentPoly::v_pow(2 * c.end_dim as i64);
                for &(a, m) in &c.parts {
                    let fdeg = cat.indecs[a].residue_degree as i64;
                    for s in 1..=m as i64 {
                        aut = &aut * &(LaurentPoly::one() - LaurentPoly::v_pow(-2 * fdeg * s));
                    }
                }
                let entry = (c.dims.clone(), f.hall.fq_dim(k), c.end_dim as i64, aut);
                if let Some(old) = keys.get(t) {
                    if *old != entry {
                        return Err(Error::Verification(format!("type {t:?} has field-dependent invariants")));
                    }
                } else {
                    keys.insert(t.clone(), entry);
                }
            }
        }
        let mut types = Vec::with_capacity(keys.len());
        for (key, (dims, fq_dim, end_dim, aut)) in keys {
            let count = fit_key(&mut fields, &build, &options, |f| rat(f.count(&key) as i64))?;
            let homogeneous = key.fixed.is_empty() && !key.homog.is_empty();
            types.push(TypeInfo { key, dims, fq_dim, end_dim, count, aut, homogeneous });
        }
        types.sort_by(|a, b| {
            let sa: usize = a.dims.iter().sum();
            let sb: usize = b.dims.iter().sum();
            (sa, &a.dims, &a.key).cmp(&(sb, &b.dims, &b.key))
        });
        let index: HashMap<TypeKey, usize> = types.iter().enumerate().map(|(k, t)| (t.key.clone(), k)).collect();
        let mut by_dim: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (k, t) in types.iter().enumerate() {
            by_dim.entry(t.dims.clone()).or_default().push(k);
        }

        let mut prod_keys: Vec<(TypeKey, TypeKey, TypeKey)> = Vec::new();
        let mut left_keys: Vec<(usize, TypeKey, TypeKey)> = Vec::new();
        let mut right_keys: Vec<(usize, TypeKey, TypeKey)> = Vec::new();
        for f in fields.values() {
            prod_keys.extend(f.prod.keys().cloned());
            left_keys.extend(f.dleft.keys().cloned());
            right_keys.extend(f.dright.keys().cloned());
        }
        prod_keys.sort();
        prod_keys.dedup();
        left_keys.sort();
        left_keys.dedup();
        right_keys.sort();
        right_keys.dedup();

        let g = |key: &TypeKey| -> Vec<i64> { types[index[key]].dims.iter().map(|&x| x as i64).collect() };
        let quiver = fields.values().next().expect("at least one field").hall.oracle.species.quiver.clone();
        let mut prod: HashMap<(usize, usize), Vec<(usize, LaurentPoly)>> = HashMap::new();
        for key in &prod_keys {
            let poly = fit_key(&mut fields, &build, &options, |f| f.prod.get(key).cloned().unwrap_or_else(BigRational::zero))?;
            let (t1, t2, t) = key;
            let tw = euler_form(&quiver, &g(t1), &g(t2));
            let c = poly.in_v().shift(tw);
            if !c.is_zero() {
                prod.entry((index[t1], index[t2])).or_default().push((index[t], c));
            }
        }
        let simples: Vec<usize> = (0..context.n())
            .map(|i| {
                let f = fields.values().next().unwrap();
                let s = f.hall.simple(i)?;
                Ok(index[&f.class_type[s]])
            })
            .collect::<Result<_>>()?;
        let mut derivs = |keys: &[(usize, TypeKey, TypeKey)], left: bool| -> Result<DerivTable> {
            let mut out: DerivTable = HashMap::new();
            for key in keys {
                let poly = fit_key(&mut fields, &build, &options, |f| {
                    let m = if left { &f.dleft } else { &f.dright };
                    m.get(key).cloned().unwrap_or_else(BigRational::zero)
                })?;
                let (i, tau, sigma) = key;
                let si: Vec<i64> = types[simples[*i]].dims.iter().map(|&x| x as i64).collect();
                let f = fields.values().next().unwrap();
                let (hom, tw) = match f.members.get(sigma) {
                    Some(ns) => {
                        let cat = &f.hall.oracle.catalog;
                        let s = f.hall.simple(*i)?;
                        if left {
                            (cat.class_hom(s, ns[0]) as i64, euler_form(&quiver, &si, &g(sigma)))
                        } else {
                            (cat.class_hom(ns[0], s) as i64, euler_form(&quiver, &g(sigma), &si))
                        }
                    }
                    None => return Err(Error::Verification(format!("type {sigma:?} missing over F_{}", f.hall.q()))),
                };
                let c = poly.in_v().shift(tw - 2 * hom);
                if !c.is_zero() {
                    out.entry((*i, index[tau])).or_default().push((index[sigma], c));
                }
            }
            Ok(out)
        };
        let dleft = derivs(&left_keys, true)?;
        let dright = derivs(&right_keys, false)?;
        let zero = index[&TypeKey::zero()];
        Ok(Self { context: context.clone(), cap: cap.to_vec(), options, fields, types, index, by_dim, prod, dleft, dright, simples, zero })
    }

    pub fn n(&self) -> usize {
        self.context.n()
    }

    pub fn type_id(&self, key: &TypeKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn types_of_dim(&self, d: &[usize]) -> &[usize] {
        self.by_dim.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn gradings(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.by_dim.keys()
    }

    pub fn field(&self, q: u32) -> Result<&FieldData> {
        self.fields.get(&q).ok_or_else(|| Error::Domain(format!("F_{q} is not part of this algebra")))
    }

    pub fn base_field(&self) -> &FieldData {
        &self.fields[&self.options.fit[0]]
    }

    pub fn simple_type(&self, i: usize) -> usize {
        self.simples[i]
    }

    pub fn basis(&self, t: usize) -> HallElement {
        let mut x = HallElement::zero(self.types[t].dims.clone());
        x.add_term(t, LaurentPoly::one());
        x
    }

    pub fn one(&self) -> HallElement {
        self.basis(self.zero)
    }

    pub fn u(&self, i: usize) -> HallElement {
        self.basis(self.simples[i])
    }

    /// Type of a module given by its indecomposable labels (no homogeneous part).
    pub fn type_of_labels(&self, fixed: &[(Label, usize)]) -> Result<usize> {
        let mut f: Vec<(Label, usize)> = fixed.iter().filter(|(_, m)| *m > 0).cloned().collect();
        f.sort();
        let key = TypeKey { fixed: f, homog: Vec::new() };
        self.type_id(&key).ok_or_else(|| Error::Budget(format!("no module of type {key:?} within cap {:?}", self.cap)))
    }

    /// `⟨M⟩ = v^{−dim M + dim End M}[[τ]]` for a type with a single member.
    pub fn angle(&self, t: usize) -> HallElement {
        let ti = &self.types[t];
        self.basis(t).scale(&LaurentPoly::v_pow(ti.end_dim - ti.fq_dim))
    }

    fn check_fits(&self, g: &[usize]) -> Result<()> {
        if leq(g, &self.cap) {
            Ok(())
        } else {
            Err(Error::Budget(format!("grading {g:?} leaves the cap {:?}", self.cap)))
        }
    }

    pub fn mult(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        let g: Vec<usize> = x.grading.iter().zip(&y.grading).map(|(a, b)| a + b).collect();
        self.check_fits(&g)?;
        let mut out = HallElement::zero(g);
        for (&a, ca) in &x.coords {
            for (&b, cb) in &y.coords {
                let c = ca * cb;
                if let Some(terms) = self.prod.get(&(a, b)) {
                    for (t, s) in terms {
                        out.add_term(*t, &c * s);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mult_all(&self, xs: &[HallElement]) -> Result<HallElement> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mult(&acc, x)?;
        }
        Ok(acc)
    }

    /// `u_i^{(p)} = u_i^p / [p]_{v_i}!`.
    pub fn divided_power(&self, i: usize, p: usize) -> Result<HallElement> {
        let mut acc = self.one();
        for _ in 0..p {
            acc = self.mult(&acc, &self.u(i))?;
        }
        let f = quantum_factorial(p as i64, self.context.d(i) as i64)?;
        let mut out = HallElement::zero(acc.grading.clone());
        for (&t, c) in &acc.coords {
            let q = c
                .div_exact(&f)
                .ok_or_else(|| Error::Verification(format!("u_{i}^{p} is not divisible by [{p}]!")))?;
            out.add_term(t, q);
        }
        Ok(out)
    }

    fn derive(&self, table: &HashMap<(usize, usize), Vec<(usize, LaurentPoly)>>, i: usize, x: &HallElement) -> HallElement {
        let mut g = x.grading.clone();
        if g[i] == 0 {
            return HallElement::zero(g);
        }
        g[i] -= 1;
        let mut out = HallElement::zero(g);
        for (&t, c) in &x.coords {
            if let Some(terms) = table.get(&(i, t)) {
                for (s, e) in terms {
                    out.add_term(*s, c * e);
                }
            }
        }
        out
    }

    /// `r(x) = u_i ⊗ _i r(x) + …`.
    pub fn derive_left(&self, i: usize, x: &HallElement) -> HallElement {
        self.derive(&self.dleft, i, x)
    }

    /// `r(x) = r_i(x) ⊗ u_i + …`.
    pub fn derive_right(&self, i: usize, x: &HallElement) -> HallElement {
        self.derive(&self.dright, i, x)
    }

    /// `([[τ]],[[τ]]) = #τ · v^{2 dim} / a_τ`.
    pub fn inner_basis(&self, t: usize) -> RationalV {
        let ti = &self.types[t];
        let num = &ti.count.in_v() * &LaurentPoly::v_pow(2 * ti.fq_dim);
        RationalV::new(num, ti.aut.clone()).expect("a_τ is nonzero")
    }

    pub fn inner(&self, x: &HallElement, y: &HallElement) -> RationalV {
        let mut s = RationalV::zero();
        if x.grading != y.grading {
            return s;
        }
        for (k, a) in &x.coords {
            if let Some(b) = y.coords.get(k) {
                s = &s + &(&RationalV::from_poly(a * b) * &self.inner_basis(*k));
            }
        }
        s
    }

    /// Homogeneous regular classes of dimension `mδ`: `H_m = Σ v^{−dim M}[M]`.
    pub fn h_element(&self, m: usize) -> Result<HallElement> {
        if m == 0 {
            return Ok(self.one());
        }
        let delta = self
            .base_field()
            .tubes
            .delta
            .clone()
            .ok_or_else(|| Error::Domain("H_m needs an affine context".into()))?;
        let g: Vec<usize> = delta.iter().map(|&x| x as usize * m).collect();
        self.check_fits(&g)?;
        let mut out = HallElement::zero(g.clone());
        for &t in self.types_of_dim(&g) {
            if self.types[t].homogeneous {
                out.add_term(t, LaurentPoly::v_pow(-self.types[t].fq_dim));
            }
        }
        Ok(out)
    }

    /// Evaluates at `v = √q` and spreads each type over its classes.
    pub fn to_field(&self, x: &HallElement, q: u32) -> Result<FieldElement> {
        let f = self.field(q)?;
        let mut out = FieldElement::new();
        for (&t, c) in &x.coords {
            let val = QSqrt::eval(q, c);
            if let Some(ks) = f.members.get(&self.types[t].key) {
                for &k in ks {
                    super::field::add_term(&mut out, k, val.clone());
                }
            }
        }
        Ok(out)
    }

    /// The number of classes of a type at a given field, as a rational.
    pub fn count_at(&self, t: usize, q: u32) -> BigRational {
        self.types[t].count.eval(q)
    }

    pub fn aut_at(&self, t: usize, q: u32) -> BigRational {
        let ti = &self.types[t];
        let f = &self.fields[&q];
        match f.members.get(&ti.key) {
            Some(ks) => bigint_to_rat(&f.hall.oracle.catalog.classes[ks[0]].aut_order),
            None => BigRational::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{expand_at_infinity, geometric_inverse};

    fn algebra(ctx: &str, cap: &[usize]) -> TypeAlgebra {
        TypeAlgebra::build(&ctx.parse().unwrap(), cap, FitOptions::default()).unwrap()
    }

    #[test]
    fn a1_polynomials() {
        let h = algebra("a1", &[2]);
        let u = h.u(0);
        let uu = h.mult(&u, &u).unwrap();
        let t2 = h.types_of_dim(&[2])[0];
        // u² = v(v² + 1)[[2S]]
        assert_eq!(uu.coeff(t2), "1*v^3 + 1*v^1".parse().unwrap());
        let ip = h.inner(&u, &u);
        assert_eq!(ip, geometric_inverse(1));
        assert_eq!(h.divided_power(0, 2).unwrap().coeff(t2), LaurentPoly::v_pow(2));
    }

    #[test]
    fn aut_polynomial_matches_fields() {
        let h = algebra("kronecker", &[2, 2]);
        for &q in h.fields.keys() {
            for (t, ti) in h.types.iter().enumerate() {
                if h.field(q).unwrap().count(&ti.key) == 0 {
                    continue;
                }
                let lhs = QSqrt::eval(q, &ti.aut);
                assert_eq!(lhs, QSqrt::rational(q, h.aut_at(t, q)), "type {:?} q={q}", ti.key);
            }
        }
    }

    #[test]
    fn kronecker_h1_count() {
        let h = algebra("kronecker", &[2, 2]);
        let h1 = h.h_element(1).unwrap();
        // the degree-one points of P¹
        let t = *h1.coords.keys().next().unwrap();
        assert_eq!(h1.coords.len(), 1);
        assert_eq!(h.types[t].count.to_text(), "1*q + 1");
        let x = h.to_field(&h1, 3).unwrap();
        assert_eq!(x.len(), 4);
    }

    #[test]
    fn leibniz_and_commutation() {
        let h = algebra("kronecker", &[2, 2]);
        for i in 0..2 {
            let ui = h.u(i);
            for t in 0..h.types.len() {
                let x = h.basis(t);
                if x.grading[i] + 1 > 2 {
                    continue;
                }
                let lhs = h.derive_left(i, &h.mult(&ui, &x).unwrap());
                let rhs = h.mult(&ui, &h.derive_left(i, &x)).unwrap().scale(&LaurentPoly::v_pow(2)).add(&x).unwrap();
                assert_eq!(lhs, rhs, "type {:?}", h.types[t].key);
            }
        }
    }

    #[test]
    fn simple_norms_for_all_contexts() {
        for ctx in ["kronecker", "c2-folded", "cyclic:2"] {
            let c: Context = ctx.parse().unwrap();
            let h = TypeAlgebra::build(&c, &vec![1; c.n()], FitOptions::default()).unwrap();
            for i in 0..c.n() {
                let s = h.inner(&h.u(i), &h.u(i));
                let d = c.d(i) as i64;
                let e = expand_at_infinity(&s, 10);
                for k in 0..=10 {
                    let want = if k % (2 * d) == 0 { rat(1) } else { rat(0) };
                    assert_eq!(e.coeff(-k), want, "{ctx} vertex {i} order {k}");
                }
            }
        }
    }
}
