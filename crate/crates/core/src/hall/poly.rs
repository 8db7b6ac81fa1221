//! Hall polynomials: Lagrange interpolation in `q` through counts at several
//! prime powers, confirmed at held-out prime powers.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{rat, LaurentPoly};

pub const DEFAULT_FIT: [u32; 4] = [2, 3, 4, 5];
pub const DEFAULT_HELD_OUT: [u32; 3] = [7, 8, 9];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallPolynomial {
    /// Coefficients of `1, q, q², …`.
    pub coeffs: Vec<BigRational>,
    pub fitted_at: Vec<u32>,
    pub verified_at: Vec<u32>,
}

fn poly_mul_linear(p: &[BigRational], root: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

/// The interpolating polynomial of minimal degree.
pub fn lagrange(points: &[(u32, BigRational)]) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); points.len().max(1)];
    for (a, (xa, ya)) in points.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (b, (xb, _)) in points.iter().enumerate() {
            if a != b {
                basis = poly_mul_linear(&basis, &rat(*xb as i64));
                denom *= rat(*xa as i64 - *xb as i64);
            }
        }
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * ya / &denom;
        }
    }
    while acc.len() > 1 && acc.last().is_some_and(|c| c.is_zero()) {
        acc.pop();
    }
    acc
}

impl HallPolynomial {
    pub fn eval(&self, q: u32) -> BigRational {
        let x = rat(q as i64);
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Substitutes `q = v²`.
    pub fn in_v(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| (2 * k as i64, c.clone())))
    }

    /// Fits through `fit` and checks at the first held-out value. A mismatch
    /// folds that point into the fit and moves on to the next held-out value;
    /// running out of held-out values is an error.
    pub fn fit<F>(mut count: F, fit: &[u32], held_out: &[u32]) -> Result<Self>
    where
        F: FnMut(u32) -> Result<BigRational>,
    {
        let mut points = Vec::new();
        for &q in fit {
            points.push((q, count(q)?));
        }
        let mut fitted_at: Vec<u32> = fit.to_vec();
        let mut pending = held_out.iter().copied();
        loop {
            let poly = Self { coeffs: lagrange(&points), fitted_at: fitted_at.clone(), verified_at: Vec::new() };
            let Some(q) = pending.next() else {
                return Err(Error::Verification(format!(
                    "no held-out field confirms the fit through {fitted_at:?}"
                )));
            };
            let actual = count(q)?;
            let predicted = poly.eval(q);
            if predicted == actual {
                return Ok(Self { verified_at: vec![q], ..poly });
            }
            points.push((q, actual));
            fitted_at.push(q);
        }
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{k}"),
            });
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_exactly() {
        let p = HallPolynomial::fit(|q| Ok(rat(q as i64 + 1)), &DEFAULT_FIT, &DEFAULT_HELD_OUT).unwrap();
        assert_eq!(p.coeffs, vec![rat(1), rat(1)]);
        assert_eq!(p.verified_at, vec![7]);
        assert_eq!(p.to_text(), "1*q + 1");
        let c = HallPolynomial::fit(|_| Ok(rat(1)), &DEFAULT_FIT, &DEFAULT_HELD_OUT).unwrap();
        assert_eq!(c.coeffs, vec![rat(1)]);
    }

    #[test]
    fn refits_on_mismatch_then_fails() {
        let cube = |q: u32| Ok(rat((q as i64).pow(5)));
        let p = HallPolynomial::fit(cube, &DEFAULT_FIT, &DEFAULT_HELD_OUT).unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.verified_at, vec![9]);
        let wild = |q: u32| Ok(rat(1i64 << q));
        assert!(HallPolynomial::fit(wild, &DEFAULT_FIT, &[7]).is_err());
    }
}
