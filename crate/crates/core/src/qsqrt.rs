//! `Q(√q)`: the coefficient field of a Hall algebra over `F_q` once `v` is
//! specialized to `√q`. When `q` is a perfect square the field collapses to `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::{rat, LaurentPoly};
use crate::linalg::Scalar;

/// `a + b·√q`. The constants from [`Scalar::zero_elt`]/[`Scalar::one_elt`] carry
/// `q = 0` and adopt the other operand's `q` in arithmetic.
#[derive(Clone)]
pub struct QSqrt {
    pub a: BigRational,
    pub b: BigRational,
    pub q: u32,
}

impl PartialEq for QSqrt {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.q == o.q)
    }
}

impl Eq for QSqrt {}

fn join(a: u32, b: u32) -> u32 {
    a.max(b)
}

fn isqrt(q: u32) -> Option<u32> {
    let r = (q as f64).sqrt().round() as u32;
    (r * r == q).then_some(r)
}

impl QSqrt {
    pub fn rational(q: u32, a: BigRational) -> Self {
        Self { a, b: BigRational::zero(), q }
    }

    pub fn from_int(q: u32, n: i64) -> Self {
        Self::rational(q, rat(n))
    }

    /// `v^e` with `v = √q`.
    pub fn v_pow(q: u32, e: i64) -> Self {
        let base = BigRational::from_integer(BigInt::from(q));
        let half = e.div_euclid(2);
        let odd = e.rem_euclid(2) == 1;
        let mut p = BigRational::one();
        let factor = if half < 0 { base.recip() } else { base.clone() };
        for _ in 0..half.unsigned_abs() {
            p *= &factor;
        }
        if odd {
            match isqrt(q) {
                Some(r) => Self::rational(q, p * rat(r as i64)),
                None => Self { a: BigRational::zero(), b: p, q },
            }
        } else {
            Self::rational(q, p)
        }
    }

    /// Evaluates a Laurent polynomial at `v = √q`.
    pub fn eval(q: u32, p: &LaurentPoly) -> Self {
        let mut acc = Self::from_int(q, 0);
        for (e, c) in p.terms() {
            let t = Self::v_pow(q, e);
            acc = Scalar::add(&acc, &Self { a: &t.a * c, b: &t.b * c, q });
        }
        acc
    }

    fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.q as i64)
    }
}

impl fmt::Debug for QSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.q)
        }
    }
}

impl Scalar for QSqrt {
    fn zero_elt() -> Self {
        Self::from_int(0, 0)
    }
    fn one_elt() -> Self {
        Self::from_int(0, 1)
    }
    fn is_null(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self { a: &self.a + &o.a, b: &self.b + &o.b, q: join(self.q, o.q) }
    }
    fn sub(&self, o: &Self) -> Self {
        Self { a: &self.a - &o.a, b: &self.b - &o.b, q: join(self.q, o.q) }
    }
    fn mul(&self, o: &Self) -> Self {
        let q = join(self.q, o.q);
        Self {
            a: &self.a * &o.a + &self.b * &o.b * rat(q as i64),
            b: &self.a * &o.b + &self.b * &o.a,
            q,
        }
    }
    fn neg(&self) -> Self {
        Self { a: -self.a.clone(), b: -self.b.clone(), q: self.q }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_null() {
            return None;
        }
        let n = self.norm();
        Some(Self { a: &self.a / &n, b: -(&self.b / &n), q: self.q })
    }
}
