//! Exact Gaussian elimination over the coefficient fields used by the Hall
//! algebra layers (`Q`, `Q(v)`, and `Q(√q)`).

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::RationalV;

/// A field with exact arithmetic.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero_elt() -> Self;
    fn one_elt() -> Self;
    fn is_null(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    fn zero_elt() -> Self {
        Zero::zero()
    }
    fn one_elt() -> Self {
        One::one()
    }
    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for RationalV {
    fn zero_elt() -> Self {
        RationalV::zero()
    }
    fn one_elt() -> Self {
        RationalV::one()
    }
    fn is_null(&self) -> bool {
        RationalV::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        RationalV::inv(self).ok()
    }
}

pub type Matrix<K> = Vec<Vec<K>>;

/// Row-reduces `m` in place; returns pivot columns.
pub fn rref<K: Scalar>(m: &mut Matrix<K>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_null()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_null() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                if !m[r][j].is_null() {
                    let t = factor.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Scalar>(m: &Matrix<K>) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

/// Expresses `target` as a combination of `basis` vectors, if possible.
pub fn solve_in_span<K: Scalar>(basis: &[Vec<K>], target: &[K]) -> Option<Vec<K>> {
    let n = basis.len();
    let dim = target.len();
    let mut m: Matrix<K> = (0..dim)
        .map(|i| {
            let mut row: Vec<K> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![K::zero_elt(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][n].clone();
    }
    Some(x)
}

/// Like [`solve_in_span`] for many targets at once; `None` entries mark
/// targets outside the span.
pub fn solve_many<K: Scalar>(basis: &[Vec<K>], targets: &[Vec<K>]) -> Vec<Option<Vec<K>>> {
    let n = basis.len();
    let dim = basis.first().map(|b| b.len()).or(targets.first().map(|t| t.len())).unwrap_or(0);
    let t = targets.len();
    let mut m: Matrix<K> = (0..dim)
        .map(|i| {
            let mut row: Vec<K> = basis.iter().map(|b| b[i].clone()).collect();
            row.extend(targets.iter().map(|tv| tv[i].clone()));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    let basis_pivots: Vec<(usize, usize)> =
        pivots.iter().enumerate().filter(|(_, &p)| p < n).map(|(r, &p)| (r, p)).collect();
    (0..t)
        .map(|k| {
            let col = n + k;
            // consistent iff no row has zero basis part and nonzero target entry
            for row in m.iter() {
                if row[..n].iter().all(|x| x.is_null()) && !row[col].is_null() {
                    return None;
                }
            }
            let mut x = vec![K::zero_elt(); n];
            for &(r, p) in &basis_pivots {
                x[p] = m[r][col].clone();
            }
            Some(x)
        })
        .collect()
}

/// Basis of the kernel of `m` (acting on column vectors).
pub fn nullspace<K: Scalar>(m: &Matrix<K>) -> Vec<Vec<K>> {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![K::zero_elt(); cols];
            x[free] = K::one_elt();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = a[r][free].neg();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{rat, LaurentPoly};

    #[test]
    fn rational_solve() {
        let basis = vec![vec![rat(1), rat(0), rat(1)], vec![rat(0), rat(1), rat(1)]];
        let x = solve_in_span(&basis, &[rat(2), rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
        assert!(solve_in_span(&basis, &[rat(1), rat(1), rat(0)]).is_none());
    }

    #[test]
    fn qv_nullspace() {
        let v = RationalV::from_poly(LaurentPoly::v_pow(1));
        let m = vec![vec![v.clone(), RationalV::one()], vec![v.mul(&v), v.clone()]];
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let x = &ns[0];
        let r0 = m[0][0].mul(&x[0]).add(&m[0][1].mul(&x[1]));
        assert!(r0.is_null());
    }
}
