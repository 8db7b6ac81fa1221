//! Small finite fields as lookup tables, and dense matrices over them.
//!
//! `F_{p^e}` is built as a tower over the prime field using a fixed table of
//! irreducible polynomials, so element encodings are reproducible. Elements
//! of an extension of `F_q` by a degree-`d` polynomial are encoded as base-`q`
//! digit strings of their coefficients in the basis `1, x, …, x^{d−1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monic irreducible polynomials, ascending coefficients in the base field's
/// encoding, keyed by `(base q, degree)`.
const IRREDUCIBLE_TABLE: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (4, 2, &[2, 1, 1]),
    (5, 2, &[3, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

/// Defining data of a field, as recorded in catalogs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFieldSpec {
    pub p: u32,
    pub degree: u32,
    /// Defining polynomial over the prime field tower step (empty for prime fields).
    pub modulus: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Gf {
    pub q: u32,
    pub p: u32,
    /// Degree over the prime field.
    pub degree: u32,
    pub spec: FiniteFieldSpec,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut n, mut e) = (q, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}

impl Gf {
    /// The field with `q` elements.
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = factor_prime_power(q)
            .ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        if q > 256 {
            return Err(Error::Unsupported(format!("field of size {q} exceeds table range")));
        }
        let base = Self::prime(p);
        if e == 1 {
            Ok(base)
        } else {
            let poly = irreducible(&base, e);
            Ok(base.extend(&poly))
        }
    }

    fn prime(p: u32) -> Self {
        let n = p as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u8;
                mul[a * n + b] = ((a * b) % n) as u8;
            }
        }
        Self::from_tables(p, p, 1, Vec::new(), add, mul)
    }

    fn from_tables(q: u32, p: u32, degree: u32, modulus: Vec<u8>, add: Vec<u8>, mul: Vec<u8>) -> Self {
        let n = q as usize;
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Self {
            q,
            p,
            degree,
            spec: FiniteFieldSpec { p, degree, modulus },
            add,
            mul,
            neg,
            inv,
        }
    }

    /// The extension `F_q[x]/(f)` for a monic irreducible `f` over `self`.
    pub fn extend(&self, f: &[u8]) -> Self {
        let d = f.len() - 1;
        let qb = self.q as usize;
        let n = qb.pow(d as u32);
        let digits = |mut a: usize| -> Vec<u8> {
            (0..d)
                .map(|_| {
                    let r = (a % qb) as u8;
                    a /= qb;
                    r
                })
                .collect()
        };
        let encode = |v: &[u8]| -> usize { v.iter().rev().fold(0, |acc, &c| acc * qb + c as usize) };
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let s: Vec<u8> = (0..d).map(|i| self.add(da[i], db[i])).collect();
                add[a * n + b] = encode(&s) as u8;
                let mut prod = vec![0u8; 2 * d];
                for i in 0..d {
                    for j in 0..d {
                        let t = self.mul(da[i], db[j]);
                        prod[i + j] = self.add(prod[i + j], t);
                    }
                }
                for k in (d..2 * d).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, &fi) in f.iter().enumerate().take(d) {
                            let t = self.mul(c, fi);
                            prod[k - d + i] = self.sub(prod[k - d + i], t);
                        }
                        prod[k] = 0;
                    }
                }
                mul[a * n + b] = encode(&prod[..d]) as u8;
            }
        }
        let mut modulus = self.spec.modulus.clone();
        modulus.extend_from_slice(f);
        Self::from_tables(n as u32, self.p, self.degree * d as u32, modulus, add, mul)
    }

    /// `F_{q^d}` over `self`, with elements encoded as base-`q` digits.
    pub fn ext_of_degree(&self, d: u32) -> Self {
        if d == 1 {
            return self.clone();
        }
        self.extend(&irreducible(self, d))
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.q).map(|x| x as u8)
    }
}

/// Monic irreducible of degree `d` over `base`: the table entry if present,
/// else the lexicographically smallest one (by base-`q` encoding of the lower
/// coefficients).
pub fn irreducible(base: &Gf, d: u32) -> Vec<u8> {
    if let Some((_, _, f)) = IRREDUCIBLE_TABLE
        .iter()
        .find(|(q, deg, _)| *q == base.q && *deg == d)
    {
        return f.to_vec();
    }
    let q = base.q as usize;
    let total = q.pow(d);
    for code in 0..total {
        let mut f: Vec<u8> = (0..d as usize)
            .map(|i| ((code / q.pow(i as u32)) % q) as u8)
            .collect();
        f.push(1);
        if is_irreducible(base, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by all monic polynomials of degree `1..=deg/2`.
pub fn is_irreducible(base: &Gf, f: &[u8]) -> bool {
    let d = f.len() - 1;
    let q = base.q as usize;
    for k in 1..=d / 2 {
        for code in 0..q.pow(k as u32) {
            let mut g: Vec<u8> = (0..k).map(|i| ((code / q.pow(i as u32)) % q) as u8).collect();
            g.push(1);
            if poly_rem(base, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(base: &Gf, f: &[u8], g: &[u8]) -> Vec<u8> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (i, &gi) in g.iter().enumerate() {
                let t = base.mul(c, gi);
                r[shift + i] = base.sub(r[shift + i], t);
            }
        }
        r.pop();
    }
    r
}

/// Dense row-major matrix over a table field.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl FMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Gf, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Gf, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, f: &Gf, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &Gf, c: u8) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j));
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Gf) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            if inv != 1 {
                for j in 0..self.cols {
                    let idx = r * self.cols + j;
                    self.data[idx] = f.mul(self.data[idx], inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..self.cols {
                    let b = self.get(r, j);
                    if b != 0 {
                        let idx = i * self.cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(nf, b));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Gf) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{x : self·x = 0}`, as vectors.
    pub fn nullspace(&self, f: &Gf) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u8; self.cols];
            x[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = f.neg(m.get(r, free));
            }
            basis.push(x);
        }
        basis
    }

    pub fn inverse(&self, f: &Gf) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = self.hcat(&Self::identity(n));
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(aug.submatrix(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self, f: &Gf) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn pow(&self, f: &Gf, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn mul_vec(&self, f: &Gf, x: &[u8]) -> Vec<u8> {
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u8;
                for (j, &xj) in x.iter().enumerate() {
                    let a = self.get(i, j);
                    if a != 0 && xj != 0 {
                        acc = f.add(acc, f.mul(a, xj));
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns forming a basis of the column space (subset of the columns).
    pub fn column_basis(&self, f: &Gf) -> Vec<usize> {
        self.clone().rref(f)
    }

    /// Solves `self · X = b` for `X`, if solvable.
    pub fn solve(&self, f: &Gf, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let mut aug = self.hcat(b);
        let pivots = aug.rref(f);
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Self::zeros(n, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, aug.get(r, n + j));
            }
        }
        Some(x)
    }
}

/// Companion matrix of a monic polynomial (multiplication by `x` on the
/// basis `1, x, …, x^{d−1}`).
pub fn companion(f: &Gf, poly: &[u8]) -> FMat {
    let d = poly.len() - 1;
    let mut m = FMat::zeros(d, d);
    for k in 0..d {
        if k + 1 < d {
            m.set(k + 1, k, 1);
        }
        m.set(k, d - 1, f.neg(poly[k]));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field(f: &Gf) {
        let q = f.q as u8;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Gf::new(q).unwrap();
            assert_eq!(f.q, q);
            check_field(&f);
        }
        assert!(Gf::new(6).is_err());
    }

    #[test]
    fn table_entries_are_irreducible() {
        for (q, d, poly) in IRREDUCIBLE_TABLE {
            let base = Gf::new(*q).unwrap();
            assert_eq!(poly.len() as u32, d + 1);
            assert!(is_irreducible(&base, poly), "q={q} d={d}");
        }
    }

    #[test]
    fn extensions_are_fields() {
        for (q, d) in [(2, 2), (3, 2), (4, 2), (5, 2), (2, 4)] {
            let base = Gf::new(q).unwrap();
            let ext = base.ext_of_degree(d);
            assert_eq!(ext.q, q.pow(d));
            check_field(&ext);
        }
    }

    #[test]
    fn companion_has_min_poly() {
        let f = Gf::new(3).unwrap();
        let poly = irreducible(&f, 2);
        let z = companion(&f, &poly);
        // z^2 + poly[1] z + poly[0] = 0
        let mut acc = z.mul(&f, &z);
        acc = acc.add(&f, &z.scale(&f, poly[1]));
        acc = acc.add(&f, &FMat::identity(2).scale(&f, poly[0]));
        assert!(acc.is_zero());
    }

    #[test]
    fn inverse_and_nullspace() {
        let f = Gf::new(5).unwrap();
        let m = FMat::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), FMat::identity(2));
        let s = FMat::from_rows(&[vec![1, 2, 3], vec![2, 4, 1]], 3);
        for x in s.nullspace(&f) {
            assert!(s.mul_vec(&f, &x).iter().all(|&c| c == 0));
        }
        assert_eq!(s.nullspace(&f).len(), 3 - s.rank(&f));
    }
}
