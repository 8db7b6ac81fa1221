//! Laurent polynomials and rational functions in `v` over the rationals.
//!
//! Everything downstream (Hall structure constants, basis transition
//! coefficients, inner products) lives in these two types.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for series expansions at `v = ∞`.
pub const DEFAULT_ORDER: i64 = 10;

/// A finitely supported map from exponents of `v` to rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(rat(1), 0)
    }

    /// `c·v^e`.
    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    pub fn v_pow(e: i64) -> Self {
        Self::monomial(rat(1), e)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn lead_coeff(&self) -> Option<&BigRational> {
        self.coeffs.values().next_back()
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Substitutes `v ↦ v^k` (used for `q = v²` and `v_i = v^{d_i}`).
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k != 0, "dilate by zero");
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        self.dilate(-1)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// True iff all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// True iff every exponent is negative, i.e. the element lies in `v^{-1}Q[v^{-1}]`.
    pub fn in_negative_part(&self) -> bool {
        self.max_exp().is_none_or(|e| e < 0)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            acc += c * pow_rat(x, *e);
        }
        acc
    }

    /// Exact division; `None` if `other` does not divide `self` in `Q[v, v^{-1}]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = divmod_top(self, other)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Long division from the top, stopping once the remainder's span is
/// shorter than the divisor's. Returns `None` for a zero divisor.
fn divmod_top(a: &LaurentPoly, b: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
    if b.is_zero() {
        return None;
    }
    let bt = b.max_exp().unwrap();
    let bb = b.min_exp().unwrap();
    let lc = b.lead_coeff().unwrap().clone();
    let mut r = a.clone();
    let mut q = LaurentPoly::zero();
    while let (Some(rt), Some(rb)) = (r.max_exp(), r.min_exp()) {
        if rt - rb < bt - bb {
            break;
        }
        let c = r.coeff(rt) / &lc;
        let e = rt - bt;
        let term = LaurentPoly::monomial(c, e);
        r = &r - &(&term * b);
        q = &q + &term;
    }
    Some((q, r))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*v^{}", c, e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for term in s.split(" + ") {
            let (c, e) = term
                .trim()
                .split_once("*v^")
                .ok_or_else(|| Error::Parse(format!("bad Laurent term `{term}`")))?;
            let c: BigRational = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
            let e: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// `[p]_{v^d} = (x^p − x^{-p})/(x − x^{-1})` with `x = v^d`.
pub fn quantum_int(p: i64, d: i64) -> Result<LaurentPoly> {
    if p < 0 || d < 1 {
        return Err(Error::Domain(format!("quantum_int({p}, {d})")));
    }
    Ok(LaurentPoly::from_terms(
        (0..p).map(|k| (d * (p - 1 - 2 * k), rat(1))),
    ))
}

/// `[p]^!_{v^d}`.
pub fn quantum_factorial(p: i64, d: i64) -> Result<LaurentPoly> {
    if p < 0 || d < 1 {
        return Err(Error::Domain(format!("quantum_factorial({p}, {d})")));
    }
    let mut acc = LaurentPoly::one();
    for k in 1..=p {
        acc = &acc * &quantum_int(k, d)?;
    }
    Ok(acc)
}

/// Symmetric Gaussian binomial, computed by the two-term recursion
/// `[n,k] = x^k [n−1,k] + x^{−(n−k)} [n−1,k−1]`.
pub fn gauss_binom(n: i64, k: i64, d: i64) -> Result<LaurentPoly> {
    if n < 0 || k < 0 || k > n || d < 1 {
        return Err(Error::Domain(format!("gauss_binom({n}, {k}, {d})")));
    }
    let mut row = vec![LaurentPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let mut t = LaurentPoly::zero();
            if j < m {
                t += &row[j as usize].shift(d * j);
            }
            if j > 0 {
                t += &row[j as usize - 1].shift(-d * (m - j));
            }
            next.push(t);
        }
        row = next;
    }
    Ok(row[k as usize].clone())
}

// ---------------------------------------------------------------------------
// Rational functions

/// Dense polynomial in `v` with rational coefficients, ascending.
type Dense = Vec<BigRational>;

fn to_dense(p: &LaurentPoly) -> (i64, Dense) {
    let lo = p.min_exp().unwrap_or(0);
    let hi = p.max_exp().unwrap_or(0);
    let mut d = vec![BigRational::zero(); (hi - lo + 1) as usize];
    for (e, c) in p.terms() {
        d[(e - lo) as usize] = c.clone();
    }
    (lo, d)
}

fn from_dense(d: &[BigRational], shift: i64) -> LaurentPoly {
    LaurentPoly::from_terms(d.iter().enumerate().map(|(i, c)| (i as i64 + shift, c.clone())))
}

fn trim(d: &mut Dense) {
    while d.len() > 1 && d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
}

fn dense_rem(a: &[BigRational], b: &[BigRational]) -> Dense {
    let mut r: Dense = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lc = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let c = &r[dr] / &lc;
        for i in 0..=db {
            let t = &c * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    r
}

fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Dense {
    let mut x: Dense = a.to_vec();
    let mut y: Dense = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    let lc = x.last().unwrap().clone();
    x.iter().map(|c| c / &lc).collect()
}

/// An element of `Q(v)`, stored as a reduced fraction whose denominator has
/// nonzero constant term and leading coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalV {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalV {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (ns, nd) = to_dense(&num);
        let (ds, dd) = to_dense(&den);
        let g = dense_gcd(&nd, &dd);
        let g = from_dense(&g, 0);
        let n = from_dense(&nd, 0).div_exact(&g).expect("gcd divides");
        let d = from_dense(&dd, 0).div_exact(&g).expect("gcd divides");
        // Normalize: den has min exponent 0 and leading coefficient 1.
        let dmin = d.min_exp().unwrap();
        let lc = d.lead_coeff().unwrap().recip();
        let shift = ns - ds;
        Ok(Self {
            num: n.shift(shift - dmin).scale(&lc),
            den: d.shift(-dmin).scale(&lc),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial this equals, if any.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.den.len() == 1 {
            let (e, c) = self.den.terms().next().unwrap();
            Some(self.num.shift(-e).scale(&c.recip()))
        } else {
            None
        }
    }

    /// Exponent of the leading term of the expansion at `v = ∞`.
    pub fn top_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.max_exp().unwrap() - self.den.max_exp().unwrap())
        }
    }

    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar()).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }
}

impl fmt::Display for RationalV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<LaurentPoly> for RationalV {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalV {
    type Output = RationalV;
    fn add(self, rhs: &RationalV) -> RationalV {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalV::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalV::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RationalV {
    type Output = RationalV;
    fn sub(self, rhs: &RationalV) -> RationalV {
        self + &(-rhs)
    }
}

impl Neg for &RationalV {
    type Output = RationalV;
    fn neg(self) -> RationalV {
        RationalV {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalV {
    type Output = RationalV;
    fn mul(self, rhs: &RationalV) -> RationalV {
        if self.is_zero() || rhs.is_zero() {
            return RationalV::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalV::from_poly(&self.num * &rhs.num);
        }
        RationalV::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Expansion at infinity

/// A truncated expansion in descending powers of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTail {
    /// `(exponent, coefficient)`, descending, nonzero coefficients only.
    pub terms: Vec<(i64, BigRational)>,
    /// Exact down to exponent `-truncation_order`.
    pub truncation_order: i64,
    /// Leading exponent of the full expansion (`None` for zero).
    pub top: Option<i64>,
}

impl SeriesTail {
    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn as_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().cloned())
    }
}

/// Expands `r` in powers of `v^{-1}` down to `v^{-order}` by long division
/// from the top.
pub fn expand_at_infinity(r: &RationalV, order: i64) -> SeriesTail {
    let top = r.top_exponent();
    let mut terms = Vec::new();
    if let Some(t) = top {
        let den = &r.den;
        let bt = den.max_exp().unwrap();
        let lc = den.lead_coeff().unwrap().clone();
        let mut rem = r.num.clone();
        let mut e = t;
        while e >= -order && !rem.is_zero() {
            let c = rem.coeff(e + bt) / &lc;
            if !c.is_zero() {
                rem -= &(den * &LaurentPoly::monomial(c.clone(), e));
                terms.push((e, c));
            }
            e -= 1;
        }
    }
    SeriesTail {
        terms,
        truncation_order: order,
        top,
    }
}

/// Membership in `Q[[v^{-1}]] ∩ Q(v)` (or `v^{-1}Q[[v^{-1}]] ∩ Q(v)` when
/// `strict`), decided by the degree of the pole at infinity.
pub fn in_lattice(r: &RationalV, strict: bool, _order: i64) -> bool {
    match r.top_exponent() {
        None => true,
        Some(t) if strict => t < 0,
        Some(t) => t <= 0,
    }
}

/// `(1 − v^{-2d})^{-1}`.
pub fn geometric_inverse(d: i64) -> RationalV {
    RationalV::new(
        LaurentPoly::v_pow(2 * d),
        &LaurentPoly::v_pow(2 * d) - &LaurentPoly::one(),
    )
    .unwrap()
}

pub fn bigint_to_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn is_nonneg_integral(p: &LaurentPoly) -> bool {
    p.terms().all(|(_, c)| c.is_integer() && !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn v() -> LaurentPoly {
        LaurentPoly::v_pow(1)
    }

    #[test]
    fn bar_examples() {
        assert_eq!(v().bar(), LaurentPoly::v_pow(-1));
        let s = &v() + &LaurentPoly::v_pow(-1);
        assert_eq!(s.bar(), s);
        let f = lp("3*v^2 + -1*v^-1");
        assert_eq!(f.bar(), lp("-1*v^1 + 3*v^-2"));
    }

    #[test]
    fn quantum_examples() {
        assert_eq!(quantum_int(2, 1).unwrap(), lp("1*v^1 + 1*v^-1"));
        assert_eq!(quantum_int(3, 1).unwrap(), lp("1*v^2 + 1*v^0 + 1*v^-2"));
        assert_eq!(quantum_int(2, 2).unwrap(), lp("1*v^2 + 1*v^-2"));
        assert!(quantum_int(0, 1).unwrap().is_zero());
        assert!(quantum_int(1, 1).unwrap().is_one());
        assert!(quantum_int(-1, 1).is_err());
        assert_eq!(quantum_factorial(2, 1).unwrap(), lp("1*v^1 + 1*v^-1"));
        assert_eq!(gauss_binom(2, 1, 1).unwrap(), lp("1*v^1 + 1*v^-1"));
        assert_eq!(
            gauss_binom(4, 2, 1).unwrap(),
            lp("1*v^4 + 1*v^2 + 2*v^0 + 1*v^-2 + 1*v^-4")
        );
        assert!(gauss_binom(2, 3, 1).is_err());
    }

    #[test]
    fn binomial_matches_factorial_ratio() {
        for d in 1..=2 {
            for n in 0..=12 {
                for k in 0..=n {
                    let num = quantum_factorial(n, d).unwrap();
                    let den = &quantum_factorial(k, d).unwrap()
                        * &quantum_factorial(n - k, d).unwrap();
                    let ratio = num.div_exact(&den).expect("exact");
                    let b = gauss_binom(n, k, d).unwrap();
                    assert_eq!(ratio, b);
                    assert!(is_nonneg_integral(&b));
                    assert!(b.is_bar_invariant());
                }
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let f = lp("1*v^2 + -1*v^-1");
        assert_eq!(f.to_string(), "1*v^2 + -1*v^-1");
        assert_eq!(lp(&f.to_string()), f);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        let g = lp("3/2*v^0");
        assert_eq!(g.to_string(), "3/2*v^0");
    }

    #[test]
    fn rational_normalization() {
        // (v^2 - 1)/(v - 1) = v + 1
        let r = RationalV::new(lp("1*v^2 + -1*v^0"), lp("1*v^1 + -1*v^0")).unwrap();
        assert_eq!(r.to_laurent().unwrap(), lp("1*v^1 + 1*v^0"));
        // v^3/v = v^2 regardless of representation
        let a = RationalV::new(LaurentPoly::v_pow(3), LaurentPoly::v_pow(1)).unwrap();
        let b = RationalV::new(lp("2*v^2"), lp("2*v^0")).unwrap();
        assert_eq!(a, b);
        assert!(RationalV::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn expansion_examples() {
        let g = RationalV::new(LaurentPoly::one(), lp("1*v^0 + -1*v^-2")).unwrap();
        let s = expand_at_infinity(&g, 6);
        assert_eq!(s.as_poly(), lp("1*v^0 + 1*v^-2 + 1*v^-4 + 1*v^-6"));
        let h = RationalV::new(v(), lp("1*v^1 + -1*v^0")).unwrap();
        assert_eq!(
            expand_at_infinity(&h, 4).as_poly(),
            lp("1*v^0 + 1*v^-1 + 1*v^-2 + 1*v^-3 + 1*v^-4")
        );
        let k = RationalV::new(lp("1*v^2 + 1*v^0"), lp("1*v^2")).unwrap();
        assert_eq!(expand_at_infinity(&k, 3).as_poly(), lp("1*v^0 + 1*v^-2"));
    }

    #[test]
    fn lattice_examples() {
        let g = RationalV::new(LaurentPoly::one(), lp("1*v^0 + -1*v^-2")).unwrap();
        assert!(in_lattice(&g, false, DEFAULT_ORDER));
        assert!(!in_lattice(&g, true, DEFAULT_ORDER));
        let p = RationalV::from_poly(lp("1*v^1 + 1*v^0"));
        assert!(!in_lattice(&p, false, DEFAULT_ORDER));
        let s = RationalV::new(lp("1*v^-1"), lp("1*v^0 + -1*v^-1")).unwrap();
        assert!(in_lattice(&s, true, DEFAULT_ORDER));
    }

    #[test]
    fn geometric_inverse_series() {
        let g = geometric_inverse(1);
        let s = expand_at_infinity(&g, 10);
        for e in 0..=10 {
            let want = if e % 2 == 0 { rat(1) } else { rat(0) };
            assert_eq!(s.coeff(-e), want);
        }
    }
}
