//! Hall numbers `g^L_{MN}` (submodules `V ⊆ L` with `V ≅ N`, `L/V ≅ M`) by
//! exhaustive enumeration of graded subspaces, and an independent count of
//! extensions used to cross-check them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::catalog::Oracle;
use super::species::{FiniteModule, Species};
use crate::error::{Error, Result};
use crate::gf::{FMat, Gf};

/// `(quotient class M, sub class N) → g^L_{MN}`.
pub type HallTable = BTreeMap<(usize, usize), u64>;

/// A graded piece `U ⊆ V_i` with an adapted change of basis whose first
/// columns span `U`.
#[derive(Clone, Debug)]
pub struct Subspace {
    /// `F_q`-dimension of `U`.
    pub dim: usize,
    pub p: FMat,
    pub pinv: FMat,
}

/// All `F_{q^d}`-subspaces of `F_{q^d}^n`, enumerated by reduced echelon form.
pub fn subspaces(sp: &Species, i: usize, n: usize) -> Vec<Subspace> {
    let ext: &Gf = &sp.ext[i];
    let d = sp.d(i);
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in k_subsets(n, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = (ext.q as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![0u8; n]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                let mut c = code;
                for &(r, col) in &free {
                    rows[r][col] = (c % ext.q as u64) as u8;
                    c /= ext.q as u64;
                }
                let mut cols: Vec<Vec<u8>> = rows.iter().flat_map(|u| sp.expand(i, u)).collect();
                for j in (0..n).filter(|j| !pivots.contains(j)) {
                    let mut e = vec![0u8; n];
                    e[j] = 1;
                    cols.extend(sp.expand(i, &e));
                }
                let dim = n * d;
                let mut p = FMat::zeros(dim, dim);
                for (j, v) in cols.iter().enumerate() {
                    for (r, &x) in v.iter().enumerate() {
                        p.set(r, j, x);
                    }
                }
                let pinv = p.inverse(&sp.base).expect("adapted basis is invertible");
                out.push(Subspace { dim: k * d, p, pinv });
            }
        }
    }
    out
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sub and quotient of `l` along a stable graded subspace, or `None` if unstable.
pub fn restrict(sp: &Species, l: &FiniteModule, choice: &[&Subspace]) -> Option<(FiniteModule, FiniteModule)> {
    let f = &sp.base;
    let mut blocks = Vec::with_capacity(sp.strands.len());
    for (h, s) in sp.strands.iter().enumerate() {
        let (us, ut) = (choice[s.source], choice[s.target]);
        let t = ut.pinv.mul(f, &l.maps[h]).mul(f, &us.p);
        if !t.submatrix(ut.dim, t.rows, 0, us.dim).is_zero() {
            return None;
        }
        blocks.push(t);
    }
    let sub_dims: Vec<usize> = (0..sp.n()).map(|i| choice[i].dim / sp.d(i)).collect();
    let quo_dims: Vec<usize> = (0..sp.n()).map(|i| l.dims[i] - sub_dims[i]).collect();
    let mut sub = sp.zero_module(&sub_dims);
    let mut quo = sp.zero_module(&quo_dims);
    for (h, s) in sp.strands.iter().enumerate() {
        let (ks, kt) = (choice[s.source].dim, choice[s.target].dim);
        let t = &blocks[h];
        sub.maps[h] = t.submatrix(0, kt, 0, ks);
        quo.maps[h] = t.submatrix(kt, t.rows, ks, t.cols);
    }
    Some((sub, quo))
}

/// Calls `visit` on every submodule of `l` as `(sub, quotient)`.
pub fn for_each_submodule(
    sp: &Species,
    l: &FiniteModule,
    mut visit: impl FnMut(FiniteModule, FiniteModule) -> Result<()>,
) -> Result<()> {
    let per_vertex: Vec<Vec<Subspace>> = (0..sp.n()).map(|i| subspaces(sp, i, l.dims[i])).collect();
    let mut idx = vec![0usize; sp.n()];
    loop {
        let choice: Vec<&Subspace> = idx.iter().enumerate().map(|(i, &k)| &per_vertex[i][k]).collect();
        if let Some((sub, quo)) = restrict(sp, l, &choice) {
            visit(sub, quo)?;
        }
        let mut v = 0;
        loop {
            if v == sp.n() {
                return Ok(());
            }
            idx[v] += 1;
            if idx[v] < per_vertex[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

impl Oracle {
    /// All Hall numbers with outer term the class `l`.
    pub fn hall_table(&self, l: usize) -> Result<HallTable> {
        let module = self.class_module(l);
        let mut table = HallTable::new();
        for_each_submodule(&self.species, &module, |sub, quo| {
            let n = self.classify(&sub)?;
            let m = self.classify(&quo)?;
            *table.entry((m, n)).or_insert(0) += 1;
            Ok(())
        })?;
        Ok(table)
    }

    /// Tables for many outer classes, in parallel; output ordered like `ls`.
    pub fn hall_tables(&self, ls: &[usize]) -> Result<Vec<HallTable>> {
        ls.par_iter().map(|&l| self.hall_table(l)).collect()
    }

    pub fn hall_number(&self, l: usize, m: usize, n: usize) -> Result<u64> {
        let (cl, cm, cn) = (&self.catalog.classes[l], &self.catalog.classes[m], &self.catalog.classes[n]);
        if cl.dims.iter().zip(&cm.dims).zip(&cn.dims).any(|((a, b), c)| *a != b + c) {
            return Ok(0);
        }
        Ok(self.hall_table(l)?.get(&(m, n)).copied().unwrap_or(0))
    }

    /// `#{X : E_X ≅ L}` over all extension cocycles `X` of `M` by `N`.
    pub fn extension_counts(&self, m: usize, n: usize) -> Result<BTreeMap<usize, u64>> {
        let sp = &self.species;
        let (mm, nn) = (self.class_module(m), self.class_module(n));
        let shapes: Vec<(usize, usize)> = sp
            .strands
            .iter()
            .map(|s| (sp.fq_dim(s.target, nn.dims[s.target]), sp.fq_dim(s.source, mm.dims[s.source])))
            .collect();
        let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let q = sp.q() as u64;
        let space = q
            .checked_pow(entries as u32)
            .filter(|&s| s <= 1 << 18)
            .ok_or_else(|| Error::Budget("extension space too large to enumerate".into()))?;
        let mut out = BTreeMap::new();
        for code in 0..space {
            let mut c = code;
            let mut e = sp.direct_sum(&nn, &mm);
            for (h, s) in sp.strands.iter().enumerate() {
                // The cocycle sits in the Hom(M_s, N_t) corner.
                let (rows, cols) = shapes[h];
                let c0 = sp.fq_dim(s.source, nn.dims[s.source]);
                for i in 0..rows {
                    for j in 0..cols {
                        e.maps[h].set(i, c0 + j, (c % q) as u8);
                        c /= q;
                    }
                }
            }
            *out.entry(self.classify(&e)?).or_insert(0u64) += 1;
        }
        Ok(out)
    }

    /// Checks `g^L_{MN} · q^{Σ d_i m_i n_i} · a_M a_N = #{X : E_X ≅ L} · a_L`
    /// for every `L`.
    pub fn verify_riedtmann(&self, m: usize, n: usize) -> Result<()> {
        let sp = &self.species;
        let cat = &self.catalog;
        let counts = self.extension_counts(m, n)?;
        let c0: usize = (0..sp.n()).map(|i| sp.d(i) * cat.classes[m].dims[i] * cat.classes[n].dims[i]).sum();
        let dims: Vec<usize> = cat.classes[m].dims.iter().zip(&cat.classes[n].dims).map(|(a, b)| a + b).collect();
        for l in cat.classes_of_dim(&dims) {
            let g = self.hall_number(l, m, n)?;
            let lhs = BigInt::from(g)
                * num_traits::pow(BigInt::from(sp.q()), c0)
                * &cat.classes[m].aut_order
                * &cat.classes[n].aut_order;
            let rhs = BigInt::from(counts.get(&l).copied().unwrap_or(0)) * &cat.classes[l].aut_order;
            if lhs != rhs {
                return Err(Error::Verification(format!(
                    "Riedtmann count mismatch for L={l}, M={m}, N={n}: {lhs} vs {rhs}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::ValuedQuiver;
    use crate::modrep::catalog::{segment_module, CatalogOptions};

    fn oracle(text: &str, q: u32, cap: &[usize]) -> Oracle {
        let g = ValuedQuiver::parse(text).unwrap();
        Oracle::build(Species::new(&g, q).unwrap(), cap, &CatalogOptions::default()).unwrap()
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        let g = ValuedQuiver::parse("vertex 1 d=2\n").unwrap();
        let sp = Species::new(&g, 2).unwrap();
        // Subspaces of F_4^2: 1 + 5 + 1.
        assert_eq!(subspaces(&sp, 0, 2).len(), 7);
        let sp3 = Species::new(&ValuedQuiver::parse("vertex 1\n").unwrap(), 3).unwrap();
        assert_eq!(subspaces(&sp3, 0, 3).len(), 1 + 13 + 13 + 1);
    }

    #[test]
    fn a1_lines_in_plane() {
        for q in [2, 3, 4, 5] {
            let o = oracle("vertex 1\n", q, &[2]);
            let s = o.simple_class(0).unwrap();
            let ss = o.catalog.classes_of_dim(&[2])[0];
            assert_eq!(o.hall_number(ss, s, s).unwrap(), q as u64 + 1);
        }
    }

    #[test]
    fn trivial_hall_numbers() {
        let o = oracle("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n", 2, &[1, 1]);
        let z = o.catalog.zero_class();
        for l in 0..o.catalog.classes.len() {
            assert_eq!(o.hall_number(l, z, l).unwrap(), 1);
            assert_eq!(o.hall_number(l, l, z).unwrap(), 1);
        }
    }

    #[test]
    fn cyclic_unique_socle() {
        let sp = Species::cyclic(2, 3).unwrap();
        let o = Oracle::build(sp, &[1, 1], &CatalogOptions::default()).unwrap();
        let l = o.classify(&segment_module(&o.species, 0, 2)).unwrap();
        let s1 = o.simple_class(0).unwrap();
        let s2 = o.simple_class(1).unwrap();
        assert_eq!(o.hall_number(l, s1, s2).unwrap(), 1);
        assert_eq!(o.hall_number(l, s2, s1).unwrap(), 0);
    }

    #[test]
    fn riedtmann_cross_check() {
        let o = oracle("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n", 2, &[2, 2]);
        let cat = &o.catalog;
        for m in 0..cat.classes.len() {
            for n in 0..cat.classes.len() {
                let d: Vec<usize> = cat.classes[m].dims.iter().zip(&cat.classes[n].dims).map(|(a, b)| a + b).collect();
                if crate::modrep::catalog::leq(&d, &cat.cap) {
                    o.verify_riedtmann(m, n).unwrap();
                }
            }
        }
    }

    #[test]
    fn species_riedtmann_cross_check() {
        let o = oracle("vertex 1 d=2\nvertex 2\narrow a 1 2 m=2\n", 2, &[1, 2]);
        let cat = &o.catalog;
        for m in 0..cat.classes.len() {
            for n in 0..cat.classes.len() {
                let d: Vec<usize> = cat.classes[m].dims.iter().zip(&cat.classes[n].dims).map(|(a, b)| a + b).collect();
                if crate::modrep::catalog::leq(&d, &cat.cap) {
                    o.verify_riedtmann(m, n).unwrap();
                }
            }
        }
    }
}
