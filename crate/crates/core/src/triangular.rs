//! Unitriangular bar-solves: given the matrix of the bar involution on a
//! standard basis, find the bar-invariant basis with off-diagonal entries in
//! `v^{-1}Q[v^{-1}]`.

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Dense square matrix of Laurent polynomials; `m[y][x]` is the coefficient of
/// basis vector `y` in the image of `x`.
pub type LMatrix = Vec<Vec<LaurentPoly>>;

pub fn identity(n: usize) -> LMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect()).collect()
}

pub fn mat_mul(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let n = a.len();
    let mut out = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn bar_matrix(a: &LMatrix) -> LMatrix {
    a.iter().map(|row| row.iter().map(|c| c.bar()).collect()).collect()
}

/// Upper unitriangular in the given index order.
pub fn is_unitriangular(a: &LMatrix) -> bool {
    let n = a.len();
    (0..n).all(|i| a[i][i].is_one() && (0..i).all(|j| a[i][j].is_zero()))
}

/// `R·bar(R) = 1`.
pub fn is_involution(r: &LMatrix) -> bool {
    mat_mul(r, &bar_matrix(r)) == identity(r.len())
}

/// The part of `p` with negative exponents.
pub fn negative_part(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())))
}

/// For upper unitriangular `R` (bar on the standard basis), returns `G` upper
/// unitriangular with `G[y][x] ∈ v^{-1}Q[v^{-1}]` for `y ≠ x` and
/// `R·bar(G) = G`, so that `C(x) = Σ_y G[y][x] E(y)` is bar-invariant.
pub fn bar_solve(r: &LMatrix) -> Result<LMatrix> {
    let n = r.len();
    if !is_unitriangular(r) {
        return Err(Error::Verification("bar matrix is not unitriangular".into()));
    }
    let mut g = identity(n);
    for x in 0..n {
        for y in (0..x).rev() {
            let mut k = LaurentPoly::zero();
            for z in y + 1..=x {
                if !r[y][z].is_zero() && !g[z][x].is_zero() {
                    k += &(&r[y][z] * &g[z][x].bar());
                }
            }
            if !(&k + &k.bar()).is_zero() {
                return Err(Error::Verification(format!("bar-solve step ({y},{x}) has no solution: {k} is not bar-antisymmetric")));
            }
            g[y][x] = negative_part(&k);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // bar(E1) = E1 + (v - v^{-1}) E0 gives C1 = E1 - v^{-1} E0
        let r: LMatrix = vec![
            vec![LaurentPoly::one(), "1*v^1 + -1*v^-1".parse().unwrap()],
            vec![LaurentPoly::zero(), LaurentPoly::one()],
        ];
        assert!(is_involution(&r));
        let g = bar_solve(&r).unwrap();
        assert_eq!(g[0][1], -LaurentPoly::v_pow(-1));
        assert_eq!(mat_mul(&r, &bar_matrix(&g)), g);
    }

    #[test]
    fn rejects_symmetric_defect() {
        let r: LMatrix = vec![vec![LaurentPoly::one(), LaurentPoly::one()], vec![LaurentPoly::zero(), LaurentPoly::one()]];
        assert!(bar_solve(&r).is_err());
    }
}
