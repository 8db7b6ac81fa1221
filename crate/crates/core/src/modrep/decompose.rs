//! Krull–Schmidt decomposition by Fitting's lemma, locality certificates for
//! endomorphism algebras, and isomorphism tests against indecomposables.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::species::{FiniteModule, Morphism, Species};
use crate::error::{Error, Result};
use crate::gf::{irreducible, FMat};

/// Largest `q^{dim End}` for which locality is certified by enumeration.
pub const LOCAL_ENUM_LIMIT: u64 = 1 << 16;

const RANDOM_TRIES: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub end_dim: usize,
    /// `End/rad ≅ F_{q^f}`.
    pub residue_degree: usize,
    pub aut_order: BigInt,
}

#[derive(Clone, Debug)]
pub enum Split {
    /// An endomorphism that is neither invertible nor nilpotent.
    Splitter(Morphism),
    Local(LocalData),
    /// Heuristics found nothing and exhaustive search was not run.
    Undecided,
}

fn is_splitter(sp: &Species, x: &Morphism) -> bool {
    !x.is_invertible(&sp.base) && !x.is_nilpotent(&sp.base)
}

fn combine(sp: &Species, basis: &[Morphism], coeffs: &[u8]) -> Morphism {
    let f = &sp.base;
    let mut acc = basis[0].scale(f, coeffs[0]);
    for (b, &c) in basis.iter().zip(coeffs).skip(1) {
        if c != 0 {
            acc = acc.add(f, &b.scale(f, c));
        }
    }
    acc
}

fn poly_eval(sp: &Species, x: &Morphism, id: &Morphism, p: &[u8]) -> Morphism {
    let f = &sp.base;
    let mut acc = id.scale(f, 0);
    for &c in p.iter().rev() {
        acc = acc.after(f, x).add(f, &id.scale(f, c));
    }
    acc
}

/// Cheap candidates first, then (if allowed and small enough) all of `End`.
pub fn find_splitter(sp: &Species, m: &FiniteModule, basis: &[Morphism], exhaustive: bool) -> Result<Split> {
    let f = &sp.base;
    let e = basis.len();
    if e == 0 {
        return Err(Error::Internal("zero module has no endomorphism basis".into()));
    }
    let id = Morphism::identity(sp, m);
    let mut candidates: Vec<Morphism> = Vec::new();
    for b in basis {
        candidates.push(b.clone());
        for lam in 1..f.q as u8 {
            candidates.push(b.add(f, &id.scale(f, f.neg(lam))));
        }
    }
    for i in 0..e {
        for j in i + 1..e {
            candidates.push(basis[i].add(f, &basis[j]));
        }
    }
    for c in &candidates {
        if is_splitter(sp, c) {
            return Ok(Split::Splitter(c.clone()));
        }
    }
    let quad = irreducible(f, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ e as u64);
    for k in 0..RANDOM_TRIES + e {
        let x = if k < e {
            basis[k].clone()
        } else {
            let coeffs: Vec<u8> = (0..e).map(|_| rng.gen_range(0..f.q) as u8).collect();
            combine(sp, basis, &coeffs)
        };
        if is_splitter(sp, &x) {
            return Ok(Split::Splitter(x));
        }
        let px = poly_eval(sp, &x, &id, &quad);
        if is_splitter(sp, &px) {
            return Ok(Split::Splitter(px));
        }
    }
    if !exhaustive {
        return Ok(Split::Undecided);
    }
    let q = f.q as u64;
    let size = q.checked_pow(e as u32).filter(|&s| s <= LOCAL_ENUM_LIMIT).ok_or_else(|| {
        Error::Budget(format!("locality of an endomorphism algebra of dimension {e} over F_{q} is not certifiable"))
    })?;
    let mut units: u64 = 0;
    let mut coeffs = vec![0u8; e];
    for code in 0..size {
        let mut c = code;
        for slot in coeffs.iter_mut() {
            *slot = (c % q) as u8;
            c /= q;
        }
        let x = combine(sp, basis, &coeffs);
        if x.is_invertible(f) {
            units += 1;
        } else if !x.is_nilpotent(f) {
            return Ok(Split::Splitter(x));
        }
    }
    let nonunits = size - units;
    let mut k = 0;
    let mut t = 1u64;
    while t < nonunits {
        t *= q;
        k += 1;
    }
    if t != nonunits {
        return Err(Error::Internal(format!("radical of size {nonunits} is not a power of {q}")));
    }
    Ok(Split::Local(LocalData { end_dim: e, residue_degree: e - k, aut_order: BigInt::from(units) }))
}

/// `F_q`-basis of the `F_{q^{d_i}}`-span of `vectors`, grouped as `(u, αu, …)`.
pub fn d_span_basis(sp: &Species, i: usize, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut rank = 0;
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank_of(sp, &trial) == rank {
            continue;
        }
        let mut u = v.clone();
        for _ in 0..sp.d(i) {
            basis.push(u.clone());
            u = sp.alpha_times(i, &u);
        }
        rank = rank_of(sp, &basis);
        debug_assert_eq!(rank, basis.len());
    }
    basis
}

fn rank_of(sp: &Species, vs: &[Vec<u8>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<u8>> = vs.to_vec();
    FMat::from_rows(&rows, vs[0].len()).rank(&sp.base)
}

fn columns_matrix(vs: &[Vec<u8>], n: usize) -> FMat {
    let mut m = FMat::zeros(n, vs.len());
    for (j, v) in vs.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

/// Splits `m = Im ψ ⊕ Ker ψ` for `ψ` the Fitting power of a splitter.
pub fn split_by(sp: &Species, m: &FiniteModule, splitter: &Morphism) -> Result<(FiniteModule, FiniteModule)> {
    let f = &sp.base;
    let psi = splitter.fitting_power(f);
    let mut changes = Vec::new();
    let mut img_dims = Vec::new();
    for i in 0..sp.n() {
        let p = &psi.0[i];
        let n = p.rows;
        let img_vecs: Vec<Vec<u8>> = p.column_basis(f).iter().map(|&j| p.col(j)).collect();
        let ker_vecs = p.nullspace(f);
        let img = d_span_basis(sp, i, &img_vecs);
        let ker = d_span_basis(sp, i, &ker_vecs);
        if img.len() + ker.len() != n {
            return Err(Error::Internal("Fitting decomposition is not a direct sum".into()));
        }
        let mut cols = img.clone();
        cols.extend(ker);
        let pmat = columns_matrix(&cols, n);
        let pinv = pmat.inverse(f).ok_or_else(|| Error::Internal("singular change of basis".into()))?;
        img_dims.push(img.len());
        changes.push((pmat, pinv));
    }
    let di = |i: usize| sp.d(i);
    let a_dims: Vec<usize> = (0..sp.n()).map(|i| img_dims[i] / di(i)).collect();
    let b_dims: Vec<usize> = (0..sp.n()).map(|i| m.dims[i] - a_dims[i]).collect();
    let mut a = sp.zero_module(&a_dims);
    let mut b = sp.zero_module(&b_dims);
    for (h, s) in sp.strands.iter().enumerate() {
        let t = changes[s.target].1.mul(f, &m.maps[h]).mul(f, &changes[s.source].0);
        let (ks, kt) = (img_dims[s.source], img_dims[s.target]);
        if !t.submatrix(kt, t.rows, 0, ks).is_zero() || !t.submatrix(0, kt, ks, t.cols).is_zero() {
            return Err(Error::Internal("Fitting summands are not submodules".into()));
        }
        a.maps[h] = t.submatrix(0, kt, 0, ks);
        b.maps[h] = t.submatrix(kt, t.rows, ks, t.cols);
    }
    Ok((a, b))
}

/// Decomposes into pieces on which the cheap splitter search fails. With
/// `exhaustive`, each piece carries a locality certificate.
pub fn decompose_pieces(sp: &Species, m: &FiniteModule, exhaustive: bool) -> Result<Vec<(FiniteModule, Option<LocalData>)>> {
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        if x.dims.iter().all(|&n| n == 0) {
            continue;
        }
        let basis = sp.end_basis(&x);
        match find_splitter(sp, &x, &basis, exhaustive)? {
            Split::Splitter(s) => {
                let (a, b) = split_by(sp, &x, &s)?;
                stack.push(b);
                stack.push(a);
            }
            Split::Local(l) => out.push((x, Some(l))),
            Split::Undecided => out.push((x, None)),
        }
    }
    Ok(out)
}

/// Indecomposable summands with locality certificates.
pub fn decompose(sp: &Species, m: &FiniteModule) -> Result<Vec<(FiniteModule, LocalData)>> {
    decompose_pieces(sp, m, true)?
        .into_iter()
        .map(|(x, l)| l.map(|l| (x, l)).ok_or_else(|| Error::Internal("missing certificate".into())))
        .collect()
}

/// `x ≅ y` for `y` with local endomorphism ring: some `f ∘ g` with
/// `f: x → y`, `g: y → x` from the Hom bases is a unit of `End y`.
pub fn iso_to_indecomposable(sp: &Species, x: &FiniteModule, y: &FiniteModule) -> bool {
    if x.dims != y.dims {
        return false;
    }
    let fs = sp.hom_basis(x, y);
    if fs.is_empty() {
        return false;
    }
    let gs = sp.hom_basis(y, x);
    fs.iter().any(|fa| gs.iter().any(|gb| fa.after(&sp.base, gb).is_invertible(&sp.base)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::ValuedQuiver;

    fn kronecker(q: u32) -> Species {
        let g = ValuedQuiver::parse("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n").unwrap();
        Species::new(&g, q).unwrap()
    }

    fn point(sp: &Species, a: u8, b: u8) -> FiniteModule {
        let mut m = sp.zero_module(&[1, 1]);
        m.maps[0] = FMat::from_rows(&[vec![a]], 1);
        m.maps[1] = FMat::from_rows(&[vec![b]], 1);
        m
    }

    #[test]
    fn semisimple_splits_fully() {
        let sp = kronecker(2);
        let m = sp.zero_module(&[2, 1]);
        let parts = decompose(&sp, &m).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|(_, l)| l.end_dim == 1 && l.aut_order == BigInt::from(1)));
    }

    #[test]
    fn two_points_split() {
        let sp = kronecker(3);
        let m = sp.direct_sum(&point(&sp, 1, 0), &point(&sp, 0, 1));
        let parts = decompose(&sp, &m).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|(x, _)| x.dims == vec![1, 1]));
    }

    #[test]
    fn regular_of_length_two_is_local() {
        let sp = kronecker(2);
        let mut m = sp.zero_module(&[2, 2]);
        m.maps[0] = FMat::identity(2);
        m.maps[1] = FMat::from_rows(&[vec![0, 0], vec![1, 0]], 2);
        let parts = decompose(&sp, &m).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1.end_dim, 2);
        assert_eq!(parts[0].1.residue_degree, 1);
        assert_eq!(parts[0].1.aut_order, BigInt::from(2));
    }

    #[test]
    fn degree_two_point_residue_field() {
        // x^2 + x + 1 has no root in F_2.
        let sp = kronecker(2);
        let mut m = sp.zero_module(&[2, 2]);
        m.maps[0] = FMat::identity(2);
        m.maps[1] = crate::gf::companion(&sp.base, &[1, 1, 1]);
        let parts = decompose(&sp, &m).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1.residue_degree, 2);
        assert_eq!(parts[0].1.aut_order, BigInt::from(3));
    }

    #[test]
    fn iso_test_distinguishes_points() {
        let sp = kronecker(3);
        let x = point(&sp, 1, 0);
        let y = point(&sp, 1, 1);
        let z = point(&sp, 2, 2);
        assert!(!iso_to_indecomposable(&sp, &x, &y));
        assert!(iso_to_indecomposable(&sp, &y, &z));
        assert!(iso_to_indecomposable(&sp, &point(&sp, 1, 2), &point(&sp, 2, 1)));
    }
}
