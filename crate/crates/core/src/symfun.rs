//! Partitions, Kostka numbers, Jacobi–Trudi, and the elements `H_m`, `S_λ`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall::{HallElement, TypeAlgebra};
use crate::laurent::{rat, LaurentPoly};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// All partitions of `n`, lexicographically decreasing.
    pub fn all(n: usize) -> Vec<Self> {
        fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `λ <_lex μ`, comparing parts from the largest.
pub fn lex_less(a: &Partition, b: &Partition) -> bool {
    a.0 < b.0
}

/// `λ ≤ μ` in dominance order (partial sums).
pub fn dominance_leq(a: &Partition, b: &Partition) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let (mut sa, mut sb) = (0, 0);
    for k in 0..a.len().max(b.len()) {
        sa += a.part(k);
        sb += b.part(k);
        if sa > sb {
            return false;
        }
    }
    true
}

fn horizontal_strips(shape: &[usize], size: usize) -> Vec<Vec<usize>> {
    // inner shapes ν ⊆ shape with shape/ν a horizontal strip of `size` boxes
    fn go(k: usize, shape: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == shape.len() {
            if left == 0 {
                let mut v = cur.clone();
                while v.last() == Some(&0) {
                    v.pop();
                }
                out.push(v);
            }
            return;
        }
        let lo = shape.get(k + 1).copied().unwrap_or(0);
        for nu in (lo..=shape[k]).rev() {
            let take = shape[k] - nu;
            if take > left {
                break;
            }
            cur.push(nu);
            go(k + 1, shape, left - take, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, shape, size, &mut Vec::new(), &mut out);
    out
}

/// Semistandard tableaux of shape `λ` and content `μ`.
pub fn kostka(lambda: &Partition, mu: &Partition) -> u64 {
    fn go(shape: Vec<usize>, content: &[usize], memo: &mut BTreeMap<(Vec<usize>, usize), u64>) -> u64 {
        if content.is_empty() {
            return u64::from(shape.is_empty());
        }
        let key = (shape.clone(), content.len());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let (last, rest) = content.split_last().expect("nonempty");
        let v = horizontal_strips(&shape, *last).into_iter().map(|inner| go(inner, rest, memo)).sum();
        memo.insert(key, v);
        v
    }
    if lambda.size() != mu.size() {
        return 0;
    }
    go(lambda.0.clone(), &mu.0, &mut BTreeMap::new())
}

/// Integer polynomial in commuting `H₁, H₂, …`; a monomial is the sorted
/// multiset of indices.
pub type HPoly = BTreeMap<Vec<usize>, i64>;

fn hpoly_mul(a: &HPoly, b: &HPoly) -> HPoly {
    let mut out = HPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<usize> = ma.iter().chain(mb).copied().collect();
            m.sort_unstable_by(|x, y| y.cmp(x));
            *out.entry(m).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn h_symbol(k: i64) -> HPoly {
    match k {
        k if k < 0 => HPoly::new(),
        0 => HPoly::from([(Vec::new(), 1)]),
        k => HPoly::from([(vec![k as usize], 1)]),
    }
}

/// `S_λ = det(H_{λ_t − t + t'})` with `H_0 = 1` and negative indices zero.
pub fn jacobi_trudi(lambda: &Partition) -> HPoly {
    let n = lambda.len();
    let entry = |t: usize, s: usize| h_symbol(lambda.part(t) as i64 - t as i64 + s as i64);
    fn det(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> HPoly) -> HPoly {
        if rows.is_empty() {
            return HPoly::from([(Vec::new(), 1)]);
        }
        let mut out = HPoly::new();
        for (k, &c) in cols.iter().enumerate() {
            let e = entry(rows[0], c);
            if e.is_empty() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
            let minor = hpoly_mul(&e, &det(&rows[1..], &rest, entry));
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for (m, c) in minor {
                *out.entry(m).or_insert(0) += sign * c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
    let idx: Vec<usize> = (0..n).collect();
    det(&idx, &idx, &entry)
}

/// `Σ_λ K_{λμ} S_λ` expanded through Jacobi–Trudi; equals `H_μ`.
pub fn h_from_schur(mu: &Partition) -> HPoly {
    let mut out = HPoly::new();
    for lambda in Partition::all(mu.size()) {
        let k = kostka(&lambda, mu) as i64;
        if k == 0 {
            continue;
        }
        for (m, c) in jacobi_trudi(&lambda) {
            *out.entry(m).or_insert(0) += k * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `H_m`; `H_0 = 1`.
pub fn h_element(h: &TypeAlgebra, m: usize) -> Result<HallElement> {
    h.h_element(m)
}

/// Evaluates Jacobi–Trudi in the Hall algebra.
pub fn s_element(h: &TypeAlgebra, lambda: &Partition) -> Result<HallElement> {
    if lambda.is_empty() {
        return Ok(h.one());
    }
    let hs: Vec<HallElement> = (0..=lambda.size()).map(|m| h.h_element(m)).collect::<Result<_>>()?;
    let mut out: Option<HallElement> = None;
    for (mono, c) in jacobi_trudi(lambda) {
        let factors: Vec<HallElement> = mono.iter().map(|&k| hs[k].clone()).collect();
        let term = h.mult_all(&factors)?.scale(&LaurentPoly::constant(rat(c)));
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    out.ok_or_else(|| Error::Internal(format!("S_{lambda} vanished")))
}

/// `H_m H_n = H_n H_m` whenever both fit in the cap.
pub fn check_h_commute(h: &TypeAlgebra, max: usize) -> Result<bool> {
    for m in 1..=max {
        for n in 1..=max - m {
            if m + n > max {
                continue;
            }
            let (a, b) = (h.h_element(m)?, h.h_element(n)?);
            if h.mult(&a, &b)? != h.mult(&b, &a)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn orders() {
        assert!(lex_less(&p(&[1, 1]), &p(&[2])));
        assert!(dominance_leq(&p(&[2, 1]), &p(&[2, 1])));
        assert!(dominance_leq(&p(&[1, 1, 1]), &p(&[2, 1])));
        assert!(!dominance_leq(&p(&[2, 1]), &p(&[1, 1, 1])));
        assert_eq!(Partition::all(4).len(), 5);
    }

    #[test]
    fn kostka_values() {
        assert_eq!(kostka(&p(&[2, 1]), &p(&[2, 1])), 1);
        assert_eq!(kostka(&p(&[2]), &p(&[1, 1])), 1);
        assert_eq!(kostka(&p(&[2, 1]), &p(&[1, 1, 1])), 2);
        assert_eq!(kostka(&p(&[1, 1]), &p(&[2])), 0);
        assert_eq!(kostka(&p(&[3, 2, 1]), &p(&[1; 6])), 16);
    }

    #[test]
    fn kostka_support_is_dominance() {
        for n in 1..=6 {
            for l in Partition::all(n) {
                for m in Partition::all(n) {
                    assert_eq!(kostka(&l, &m) != 0, dominance_leq(&m, &l), "{l} {m}");
                }
            }
        }
    }

    #[test]
    fn jacobi_trudi_small() {
        assert_eq!(jacobi_trudi(&p(&[1])), HPoly::from([(vec![1], 1)]));
        assert_eq!(jacobi_trudi(&p(&[2])), HPoly::from([(vec![2], 1)]));
        assert_eq!(jacobi_trudi(&p(&[1, 1])), HPoly::from([(vec![1, 1], 1), (vec![2], -1)]));
        assert_eq!(jacobi_trudi(&Partition::empty()), HPoly::from([(vec![], 1)]));
    }

    #[test]
    fn h_to_s_transition() {
        for n in 1..=4 {
            for mu in Partition::all(n) {
                assert_eq!(h_from_schur(&mu), HPoly::from([(mu.0.clone(), 1)]), "{mu}");
            }
        }
    }
}
