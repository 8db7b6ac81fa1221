//! Admissible triples `(P, ε_i, φ_i)` on graded slices of the composition
//! algebra, with `ε_i = _i r` and `φ_i = u_i * (−)`, the string decomposition
//! `P = ⊕ φ^{(N)} P(0)`, Kashiwara's operators, and their lattice checks.
//!
//! Elements are vectors of `N`-coordinates over `Q(v)`; operators are stored
//! column by column.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hall::HallElement;
use crate::laurent::{in_lattice, LaurentPoly, RationalV};
use crate::linalg::{nullspace, solve_in_span};
use crate::modrep::catalog::{box_dims, leq};
use crate::pbwbasis::{PbwAlgebra, PbwBasis, PbwIndex};

pub type Vector = Vec<RationalV>;
/// `m[a]` is the image of the `a`-th basis vector.
pub type Operator = Vec<Vector>;

fn lin(c: &RationalV, x: &[RationalV], acc: &mut [RationalV]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

pub fn apply(m: &Operator, dim: usize, x: &[RationalV]) -> Vector {
    let mut out = vec![RationalV::zero(); dim];
    for (c, col) in x.iter().zip(m) {
        lin(c, col, &mut out);
    }
    out
}

fn compose(a: &Operator, a_dim: usize, b: &Operator) -> Operator {
    b.iter().map(|col| apply(a, a_dim, col)).collect()
}

fn scaled(c: &RationalV, m: &Operator) -> Operator {
    m.iter().map(|col| col.iter().map(|x| c * x).collect()).collect()
}

fn unit(dim: usize, k: usize) -> Vector {
    let mut v = vec![RationalV::zero(); dim];
    v[k] = RationalV::one();
    v
}

fn identity(dim: usize) -> Operator {
    (0..dim).map(|k| unit(dim, k)).collect()
}

fn sub_op(a: &Operator, b: &Operator) -> Operator {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn in_lattice_vec(x: &[RationalV], strict: bool) -> bool {
    x.iter().all(|c| in_lattice(c, strict, 0))
}

/// `(P, ε_i, φ_i)` restricted to the slices of a cap.
pub struct AdmissibleTriple<'p, 'a> {
    pub pa: &'p PbwAlgebra<'a>,
    pub vertex: usize,
    /// `v_i = v^{d_i}`.
    pub vi: LaurentPoly,
    cap: Vec<usize>,
    slices: BTreeMap<Vec<usize>, (Vec<PbwIndex>, Vec<HallElement>)>,
    eps: Mutex<HashMap<Vec<usize>, Operator>>,
    phi: Mutex<HashMap<(Vec<usize>, usize), Operator>>,
}

impl<'p, 'a> AdmissibleTriple<'p, 'a> {
    pub fn new(pa: &'p PbwAlgebra<'a>, basis: &PbwBasis, vertex: usize) -> Result<Self> {
        if vertex >= pa.h.n() {
            return Err(Error::Domain(format!("vertex {vertex} out of range")));
        }
        let mut slices: BTreeMap<Vec<usize>, (Vec<PbwIndex>, Vec<HallElement>)> = BTreeMap::new();
        slices.insert(vec![0; pa.h.n()], (vec![pa.zero_index()], vec![pa.h.one()]));
        let mut cap = vec![0; pa.h.n()];
        for (nu, s) in &basis.slices {
            for (c, x) in cap.iter_mut().zip(nu) {
                *c = (*c).max(*x);
            }
            slices.insert(nu.clone(), (s.indices.clone(), s.n_elems.clone()));
        }
        Ok(Self {
            pa,
            vertex,
            vi: LaurentPoly::v_pow(pa.h.context.d(vertex) as i64),
            cap,
            slices,
            eps: Mutex::new(HashMap::new()),
            phi: Mutex::new(HashMap::new()),
        })
    }

    fn vi_pow(&self, k: i64) -> RationalV {
        RationalV::from_poly(self.vi.pow(k.unsigned_abs() as u32)).inv_if(k < 0)
    }

    pub fn gradings(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.slices.keys()
    }

    pub fn indices(&self, nu: &[usize]) -> Option<&[PbwIndex]> {
        self.slices.get(nu).map(|s| s.0.as_slice())
    }

    /// Dimension of a slice; `0` for gradings that do not exist.
    pub fn dim(&self, nu: Option<&[usize]>) -> usize {
        nu.and_then(|g| self.slices.get(g)).map_or(0, |s| s.0.len())
    }

    pub fn shift(&self, nu: &[usize], k: i64) -> Option<Vec<usize>> {
        let mut g = nu.to_vec();
        let x = g[self.vertex] as i64 + k;
        if x < 0 {
            return None;
        }
        g[self.vertex] = x as usize;
        Some(g)
    }

    fn slice(&self, nu: &[usize]) -> Result<&(Vec<PbwIndex>, Vec<HallElement>)> {
        self.slices.get(nu).ok_or_else(|| Error::Budget(format!("grading {nu:?} leaves the cap {:?}", self.cap)))
    }

    pub fn fits(&self, nu: &[usize]) -> bool {
        leq(nu, &self.cap)
    }

    /// `ε` from `nu` to `nu − e_i` (columns of length 0 when `nu_i = 0`).
    pub fn eps_matrix(&self, nu: &[usize]) -> Result<Operator> {
        if let Some(m) = self.eps.lock().expect("cache lock").get(nu) {
            return Ok(m.clone());
        }
        let (_, elems) = self.slice(nu)?;
        let m = match self.shift(nu, -1) {
            None => vec![Vec::new(); elems.len()],
            Some(lower) => {
                let images: Vec<HallElement> = elems.iter().map(|x| self.pa.h.derive_left(self.vertex, x)).collect();
                let (_, lower_elems) = self.slice(&lower)?;
                self.pa.coords_many(&lower, lower_elems, &images)?
            }
        };
        self.eps.lock().expect("cache lock").insert(nu.to_vec(), m.clone());
        Ok(m)
    }

    /// `φ^{(n)}` from `nu` to `nu + n e_i`.
    pub fn phi_matrix(&self, nu: &[usize], n: usize) -> Result<Operator> {
        let key = (nu.to_vec(), n);
        if let Some(m) = self.phi.lock().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let (_, elems) = self.slice(nu)?;
        let m = if n == 0 {
            identity(elems.len())
        } else {
            let upper = self.shift(nu, n as i64).expect("nonnegative");
            let (_, upper_elems) = self.slice(&upper)?;
            let u = self.pa.h.divided_power(self.vertex, n)?;
            let images: Vec<HallElement> = elems.iter().map(|x| self.pa.h.mult(&u, x)).collect::<Result<_>>()?;
            self.pa.coords_many(&upper, upper_elems, &images)?
        };
        self.phi.lock().expect("cache lock").insert(key, m.clone());
        Ok(m)
    }

    /// Basis of `P(0)` in grading `nu`.
    pub fn p0_basis(&self, nu: &[usize]) -> Result<Vec<Vector>> {
        let dim = self.dim(Some(nu));
        let eps = self.eps_matrix(nu)?;
        let target = self.dim(self.shift(nu, -1).as_deref());
        if target == 0 {
            return Ok(identity(dim));
        }
        let rows: Vec<Vector> = (0..target).map(|r| eps.iter().map(|col| col[r].clone()).collect()).collect();
        Ok(nullspace(&rows))
    }

    /// `x = Σ φ^{(N)} y_N` with `ε(y_N) = 0`; only nonzero `y_N` are listed.
    pub fn string_decompose(&self, nu: &[usize], x: &[RationalV]) -> Result<Vec<(usize, Vector)>> {
        let dim = self.dim(Some(nu));
        let mut images = Vec::new();
        let mut sources: Vec<(usize, Vector)> = Vec::new();
        for n in 0..=nu[self.vertex] {
            let mu = self.shift(nu, -(n as i64)).expect("n ≤ nu_i");
            let phi = self.phi_matrix(&mu, n)?;
            for p in self.p0_basis(&mu)? {
                images.push(apply(&phi, dim, &p));
                sources.push((n, p));
            }
        }
        if images.len() != dim {
            return Err(Error::Verification(format!("⊕ φ^(N) P(0) has dimension {} at {nu:?}, expected {dim}", images.len())));
        }
        if dim == 0 {
            return Ok(Vec::new());
        }
        let coef = solve_in_span(&images, x)
            .ok_or_else(|| Error::Verification(format!("string decomposition fails at {nu:?}")))?;
        let mut parts: BTreeMap<usize, Vector> = BTreeMap::new();
        for (c, (n, p)) in coef.iter().zip(&sources) {
            let mu_dim = p.len();
            let acc = parts.entry(*n).or_insert_with(|| vec![RationalV::zero(); mu_dim]);
            lin(c, p, acc);
        }
        let out: Vec<(usize, Vector)> = parts.into_iter().filter(|(_, y)| y.iter().any(|c| !c.is_zero())).collect();
        let mut check = vec![RationalV::zero(); dim];
        for (n, y) in &out {
            let mu = self.shift(nu, -(*n as i64)).expect("n ≤ nu_i");
            let img = apply(&self.phi_matrix(&mu, *n)?, dim, y);
            lin(&RationalV::one(), &img, &mut check);
        }
        if check != x {
            return Err(Error::Verification(format!("string decomposition does not reassemble at {nu:?}")));
        }
        Ok(out)
    }

    /// `ε̃(φ^{(N)} y) = φ^{(N−1)} y`, landing in `nu − e_i` (empty when `nu_i = 0`).
    pub fn etilde(&self, nu: &[usize], x: &[RationalV]) -> Result<Vector> {
        let Some(lower) = self.shift(nu, -1) else { return Ok(Vec::new()) };
        let dim = self.dim(Some(&lower));
        let mut out = vec![RationalV::zero(); dim];
        for (n, y) in self.string_decompose(nu, x)? {
            if n == 0 {
                continue;
            }
            let mu = self.shift(nu, -(n as i64)).expect("n ≤ nu_i");
            lin(&RationalV::one(), &apply(&self.phi_matrix(&mu, n - 1)?, dim, &y), &mut out);
        }
        Ok(out)
    }

    /// `φ̃(φ^{(N)} y) = φ^{(N+1)} y`, landing in `nu + e_i`.
    pub fn phitilde(&self, nu: &[usize], x: &[RationalV]) -> Result<Vector> {
        let upper = self.shift(nu, 1).expect("nonnegative");
        if !self.fits(&upper) {
            return Err(Error::Budget(format!("φ̃ leaves the cap {:?} at {nu:?}", self.cap)));
        }
        let dim = self.dim(Some(&upper));
        let mut out = vec![RationalV::zero(); dim];
        for (n, y) in self.string_decompose(nu, x)? {
            let mu = self.shift(nu, -(n as i64)).expect("n ≤ nu_i");
            lin(&RationalV::one(), &apply(&self.phi_matrix(&mu, n + 1)?, dim, &y), &mut out);
        }
        Ok(out)
    }

    /// `εφ − v_i²φε = 1` on `nu`; `None` when `φ` leaves the cap.
    pub fn commutation_defect(&self, nu: &[usize]) -> Result<Option<Operator>> {
        self.divided_defect(nu, 1)
    }

    /// `εφ^{(n)} − v_i^{2n}φ^{(n)}ε − v_i^{n−1}φ^{(n−1)}` on `nu`; zero when the identity holds.
    pub fn divided_defect(&self, nu: &[usize], n: usize) -> Result<Option<Operator>> {
        let upper = self.shift(nu, n as i64).expect("nonnegative");
        if !self.fits(&upper) || n == 0 {
            return Ok(None);
        }
        let dim = self.dim(Some(nu));
        let down = self.shift(nu, n as i64 - 1).expect("n ≥ 1");
        let down_dim = self.dim(Some(&down));
        let left = compose(&self.eps_matrix(&upper)?, down_dim, &self.phi_matrix(nu, n)?);
        let right = match self.shift(nu, -1) {
            Some(lower) => compose(&self.phi_matrix(&lower, n)?, down_dim, &self.eps_matrix(nu)?),
            None => vec![vec![RationalV::zero(); down_dim]; dim],
        };
        let last = scaled(&self.vi_pow(n as i64 - 1), &self.phi_matrix(nu, n - 1)?);
        Ok(Some(sub_op(&sub_op(&left, &scaled(&self.vi_pow(2 * n as i64), &right)), &last)))
    }
}

trait InvIf {
    fn inv_if(self, b: bool) -> Self;
}

impl InvIf for RationalV {
    fn inv_if(self, b: bool) -> Self {
        if b {
            self.inv().expect("v-power is invertible")
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Check {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexReport {
    pub vertex: usize,
    pub commutation: Check,
    pub divided_powers: Check,
    pub round_trip: Check,
    pub lattice: Check,
    /// `v·N(a)` and `φ̃(v·N(a))` must both be rejected by the lattice test.
    pub negative_control: Check,
}

impl VertexReport {
    pub fn passed(&self) -> bool {
        [&self.commutation, &self.divided_powers, &self.round_trip, &self.lattice, &self.negative_control]
            .iter()
            .all(|c| c.passed())
    }
}

/// Operator identities, round trips and lattice stability at one vertex.
pub fn verify_vertex(t: &AdmissibleTriple<'_, '_>) -> Result<VertexReport> {
    let mut rep = VertexReport {
        vertex: t.vertex,
        commutation: Check::default(),
        divided_powers: Check::default(),
        round_trip: Check::default(),
        lattice: Check::default(),
        negative_control: Check::default(),
    };
    let v = RationalV::from_poly(LaurentPoly::v_pow(1));
    let gradings: Vec<Vec<usize>> = t.gradings().cloned().collect();
    for nu in &gradings {
        let dim = t.dim(Some(nu));
        if let Some(d) = t.commutation_defect(nu)? {
            rep.commutation.record(d.iter().all(|c| c.iter().all(|x| x.is_zero())), || format!("εφ − v_i²φε ≠ 1 at {nu:?}"));
        }
        for n in 2..=t.cap[t.vertex] {
            if let Some(d) = t.divided_defect(nu, n)? {
                rep.divided_powers
                    .record(d.iter().all(|c| c.iter().all(|x| x.is_zero())), || format!("ε φ^({n}) identity fails at {nu:?}"));
            }
        }
        let names = t.indices(nu).expect("listed grading").to_vec();
        let up = t.shift(nu, 1).filter(|g| t.fits(g));
        for (k, a) in names.iter().enumerate() {
            let x = unit(dim, k);
            let strings = t.string_decompose(nu, &x)?;
            let e = t.etilde(nu, &x)?;
            rep.lattice.record(in_lattice_vec(&e, false), || format!("ε̃ N({a}) ∉ L at vertex {}", t.vertex));
            rep.lattice.record(strings.iter().all(|(_, y)| in_lattice_vec(y, false)), || format!("a string part of N({a}) ∉ L"));
            if up.is_some() {
                let p = t.phitilde(nu, &x)?;
                rep.lattice.record(in_lattice_vec(&p, false), || format!("φ̃ N({a}) ∉ L at vertex {}", t.vertex));
                let back = t.etilde(up.as_deref().expect("checked"), &p)?;
                rep.round_trip.record(back == x, || format!("ε̃φ̃ N({a}) ≠ N({a})"));
            }
            if nu[t.vertex] > 0 {
                let lower = t.shift(nu, -1).expect("nu_i > 0");
                let pe = t.phitilde(&lower, &e)?;
                let mut want = x.clone();
                if let Some((0, y0)) = strings.first() {
                    for (w, y) in want.iter_mut().zip(y0) {
                        *w = &*w - y;
                    }
                }
                rep.round_trip.record(pe == want, || format!("φ̃ε̃ N({a}) ≠ N({a}) − its P(0) part"));
            }
            let vx: Vector = x.iter().map(|c| &v * c).collect();
            let mut caught = !in_lattice_vec(&vx, false);
            if up.is_some() {
                caught &= !in_lattice_vec(&t.phitilde(nu, &vx)?, false);
            }
            rep.negative_control.record(caught, || format!("v·N({a}) passed the lattice test"));
        }
    }
    Ok(rep)
}

/// `ε_{i₀} N(c^⊢, t_λ) = 0` and `φ̃^N N(c^⊢, t_λ) = N(c, t_λ)` with `N = c_−(0)`,
/// where `i₀` is the sink with `β_0 = e_{i₀}`.
pub fn verify_sink_identity(t: &AdmissibleTriple<'_, '_>, a: &PbwIndex) -> Result<bool> {
    let pa = t.pa;
    let beta0 = pa.beta_of(0)?;
    if beta0[t.vertex] != 1 || beta0.iter().sum::<usize>() != 1 {
        return Err(Error::Domain(format!("vertex {} is not the sink of β_0", t.vertex)));
    }
    let n = a.triple.c_minus.get(&0).copied().unwrap_or(0);
    let mut reduced = a.clone();
    reduced.triple.c_minus.remove(&0);
    if !pa.h.derive_left(t.vertex, &pa.n_element(&reduced)?).is_zero() {
        return Ok(false);
    }
    let mut nu = pa.grading(&reduced)?;
    let names = t.indices(&nu).ok_or_else(|| Error::Budget(format!("grading {nu:?} not in the basis")))?;
    let k = names.iter().position(|x| *x == reduced).ok_or_else(|| Error::Internal(format!("{reduced} missing")))?;
    let mut x = unit(names.len(), k);
    for _ in 0..n {
        x = t.phitilde(&nu, &x)?;
        nu = t.shift(&nu, 1).expect("nonnegative");
    }
    let names = t.indices(&nu).expect("phitilde stays in the basis");
    let k = names.iter().position(|y| y == a).ok_or_else(|| Error::Internal(format!("{a} missing")))?;
    Ok(x == unit(names.len(), k))
}

#[derive(Clone, Debug, Serialize)]
pub struct KashiwaraReport {
    pub vertices: Vec<VertexReport>,
    pub sink_vertex: usize,
    pub sink_identity: Check,
}

impl KashiwaraReport {
    pub fn passed(&self) -> bool {
        self.vertices.iter().all(|v| v.passed()) && self.sink_identity.passed()
    }
}

/// The full suite on every slice of `basis`.
pub fn verify_suite(pa: &PbwAlgebra<'_>, basis: &PbwBasis) -> Result<KashiwaraReport> {
    let mut vertices = Vec::new();
    for i in 0..pa.h.n() {
        vertices.push(verify_vertex(&AdmissibleTriple::new(pa, basis, i)?)?);
    }
    let sink = pa.seq.at(0);
    let t = AdmissibleTriple::new(pa, basis, sink)?;
    let mut sink_identity = Check::default();
    let cap: Vec<usize> = t.cap.clone();
    for nu in box_dims(&cap) {
        let Some(names) = t.indices(&nu) else { continue };
        for a in names {
            let ok = verify_sink_identity(&t, a)?;
            sink_identity.record(ok, || format!("sink identity fails at {a}"));
        }
    }
    Ok(KashiwaraReport { vertices, sink_vertex: sink, sink_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::{FitOptions, TypeAlgebra};

    #[test]
    fn strings_of_small_elements() {
        let h = TypeAlgebra::build(&"kronecker".parse().unwrap(), &[2, 2], FitOptions::default()).unwrap();
        let pa = PbwAlgebra::new(&h).unwrap();
        let basis = pa.basis(&[2, 2]).unwrap();
        let t = AdmissibleTriple::new(&pa, &basis, 0).unwrap();
        // u_0 = φ^{(1)} 1
        let s = t.string_decompose(&[1, 0], &[RationalV::one()]).unwrap();
        assert_eq!(s, vec![(1, vec![RationalV::one()])]);
        // φ̃ 1 = u_0, ε̃ of a P(0) element vanishes
        assert_eq!(t.phitilde(&[0, 0], &[RationalV::one()]).unwrap(), vec![RationalV::one()]);
        let t1 = AdmissibleTriple::new(&pa, &basis, 1).unwrap();
        assert_eq!(t1.etilde(&[1, 0], &[RationalV::one()]).unwrap(), Vec::<RationalV>::new());
        for y in t.p0_basis(&[1, 1]).unwrap() {
            assert!(t.etilde(&[1, 1], &y).unwrap().iter().all(|c| c.is_zero()));
        }
        // u_0^{(2)} * u_1 reassembles from its strings
        let x = h.mult(&h.divided_power(0, 2).unwrap(), &h.u(1)).unwrap();
        let (_, elems) = t.slice(&[2, 1]).unwrap();
        let coords = pa.coords_many(&[2, 1], elems, &[x]).unwrap().remove(0);
        let s = t.string_decompose(&[2, 1], &coords).unwrap();
        assert!(!s.is_empty());
        assert!(matches!(t.phitilde(&[2, 2], &vec![RationalV::zero(); 6]), Err(Error::Budget(_))));
    }

    #[test]
    fn kronecker_suite() {
        let h = TypeAlgebra::build(&"kronecker".parse().unwrap(), &[2, 2], FitOptions::default()).unwrap();
        let pa = PbwAlgebra::new(&h).unwrap();
        let basis = pa.basis(&[2, 2]).unwrap();
        let rep = verify_suite(&pa, &basis).unwrap();
        for v in &rep.vertices {
            assert!(v.passed(), "{v:?}");
        }
        assert_eq!(rep.sink_vertex, 1);
        assert!(rep.sink_identity.passed(), "{:?}", rep.sink_identity);
    }
}
