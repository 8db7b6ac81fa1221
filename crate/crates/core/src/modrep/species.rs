//! Representations of a valued quiver realized over a finite field.
//!
//! Vertex `i` carries `V_i = F_{q^{d_i}}^{n_i}`, stored as `F_q^{d_i n_i}` with
//! multiplication by the field generator acting as the block-diagonal
//! companion matrix. An arrow of valuation `m = k·lcm(d_s, d_t)` with
//! coprime endpoint valuations contributes `k` strands, each an arbitrary
//! `F_q`-linear map `V_s → V_t`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cartan::ValuedQuiver;
use crate::error::{Error, Result};
use crate::gf::{companion, irreducible, FMat, Gf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strand {
    pub arrow: usize,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Species {
    pub quiver: ValuedQuiver,
    /// Nilpotent representations of an oriented cycle.
    pub cyclic: bool,
    pub base: Gf,
    pub ext: Vec<Gf>,
    /// `comp_pows[i][c]` is the `c`-th power of the companion matrix at vertex `i`.
    pub comp_pows: Vec<Vec<FMat>>,
    pub strands: Vec<Strand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteModule {
    /// Dimension over `F_{q^{d_i}}` at each vertex.
    pub dims: Vec<usize>,
    /// One `F_q` matrix per strand, `(d_t n_t) × (d_s n_s)`.
    pub maps: Vec<FMat>,
}

/// A module homomorphism, one `F_q` matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism(pub Vec<FMat>);

impl Species {
    pub fn new(quiver: &ValuedQuiver, q: u32) -> Result<Self> {
        quiver.validate()?;
        Self::build(quiver.clone(), false, q)
    }

    /// Nilpotent representations of `1 → 2 → ⋯ → r → 1`.
    pub fn cyclic(r: usize, q: u32) -> Result<Self> {
        Self::build(cyclic_quiver(r)?, true, q)
    }

    fn build(quiver: ValuedQuiver, cyclic: bool, q: u32) -> Result<Self> {
        let base = Gf::new(q)?;
        let mut ext = Vec::new();
        let mut comp_pows = Vec::new();
        for &d in &quiver.d {
            let d = d as u32;
            if (q as u64).pow(d) > 256 {
                return Err(Error::Unsupported(format!("F_{{{q}^{d}}} exceeds table range")));
            }
            let c = if d == 1 { FMat::identity(1) } else { companion(&base, &irreducible(&base, d)) };
            let mut pows = vec![FMat::identity(d as usize)];
            for k in 1..d as usize {
                pows.push(pows[k - 1].mul(&base, &c));
            }
            ext.push(base.ext_of_degree(d));
            comp_pows.push(pows);
        }
        let mut strands = Vec::new();
        for (h, a) in quiver.arrows.iter().enumerate() {
            let (ds, dt) = (quiver.d[a.source], quiver.d[a.target]);
            if ds.gcd(&dt) != 1 {
                return Err(Error::Unsupported(format!(
                    "arrow {} joins vertices with non-coprime valuations {ds}, {dt}",
                    a.id
                )));
            }
            let l = ds.lcm(&dt);
            if a.m % l != 0 {
                return Err(Error::Domain(format!("valuation of arrow {} is not a multiple of {l}", a.id)));
            }
            for _ in 0..a.m / l {
                strands.push(Strand { arrow: h, source: a.source, target: a.target });
            }
        }
        Ok(Self { quiver, cyclic, base, ext, comp_pows, strands })
    }

    pub fn q(&self) -> u32 {
        self.base.q
    }

    pub fn n(&self) -> usize {
        self.quiver.d.len()
    }

    pub fn d(&self, i: usize) -> usize {
        self.quiver.d[i] as usize
    }

    /// `F_q`-dimension of `V_i` for `n_i = n`.
    pub fn fq_dim(&self, i: usize, n: usize) -> usize {
        self.d(i) * n
    }

    pub fn total_fq_dim(&self, dims: &[usize]) -> usize {
        dims.iter().enumerate().map(|(i, &n)| self.fq_dim(i, n)).sum()
    }

    /// `F_q`-coordinates of an element of `F_{q^{d_i}}`.
    pub fn coords(&self, i: usize, a: u8) -> Vec<u8> {
        let q = self.q() as usize;
        let mut a = a as usize;
        (0..self.d(i))
            .map(|_| {
                let r = (a % q) as u8;
                a /= q;
                r
            })
            .collect()
    }

    /// `F_q`-matrix of multiplication by `a ∈ F_{q^{d_i}}`.
    pub fn mult_matrix(&self, i: usize, a: u8) -> FMat {
        let d = self.d(i);
        let mut m = FMat::zeros(d, d);
        for (c, &x) in self.coords(i, a).iter().enumerate() {
            if x != 0 {
                m = m.add(&self.base, &self.comp_pows[i][c].scale(&self.base, x));
            }
        }
        m
    }

    /// Expands a vector of `F_{q^{d_i}}^n` into the `d_i` `F_q`-vectors `α^c u`.
    pub fn expand(&self, i: usize, u: &[u8]) -> Vec<Vec<u8>> {
        let d = self.d(i);
        let first: Vec<u8> = u.iter().flat_map(|&x| self.coords(i, x)).collect();
        let mut out = vec![first];
        for c in 1..d {
            out.push(self.alpha_times(i, &out[c - 1]));
        }
        out
    }

    /// Multiplication by the generator on `F_q^{d_i n}`.
    pub fn alpha_times(&self, i: usize, x: &[u8]) -> Vec<u8> {
        let d = self.d(i);
        if d == 1 {
            return x.to_vec();
        }
        let c = &self.comp_pows[i][1];
        x.chunks(d).flat_map(|blk| c.mul_vec(&self.base, blk)).collect()
    }

    pub fn zero_module(&self, dims: &[usize]) -> FiniteModule {
        FiniteModule {
            dims: dims.to_vec(),
            maps: self
                .strands
                .iter()
                .map(|s| FMat::zeros(self.fq_dim(s.target, dims[s.target]), self.fq_dim(s.source, dims[s.source])))
                .collect(),
        }
    }

    pub fn simple(&self, i: usize) -> FiniteModule {
        let mut dims = vec![0; self.n()];
        dims[i] = 1;
        self.zero_module(&dims)
    }

    pub fn check_module(&self, m: &FiniteModule) -> Result<()> {
        if m.dims.len() != self.n() || m.maps.len() != self.strands.len() {
            return Err(Error::Context("module shape does not match species".into()));
        }
        for (a, s) in m.maps.iter().zip(&self.strands) {
            if a.rows != self.fq_dim(s.target, m.dims[s.target]) || a.cols != self.fq_dim(s.source, m.dims[s.source]) {
                return Err(Error::Context("strand matrix has wrong shape".into()));
            }
        }
        if self.cyclic && !self.is_nilpotent(m) {
            return Err(Error::Domain("cyclic-quiver module is not nilpotent".into()));
        }
        Ok(())
    }

    /// Every path of length `Σ n_i` acts as zero.
    pub fn is_nilpotent(&self, m: &FiniteModule) -> bool {
        let total: usize = m.dims.iter().sum();
        if total == 0 {
            return true;
        }
        // For the cyclic quiver, the composite around the cycle from vertex 0.
        if !self.cyclic {
            return true;
        }
        let r = self.n();
        let mut cycle = FMat::identity(self.fq_dim(0, m.dims[0]));
        for k in 0..r {
            let s = self.strands.iter().position(|s| s.source == k).expect("cyclic strand");
            cycle = m.maps[s].mul(&self.base, &cycle);
        }
        cycle.pow(&self.base, total).is_zero()
    }

    pub fn direct_sum(&self, a: &FiniteModule, b: &FiniteModule) -> FiniteModule {
        FiniteModule {
            dims: a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect(),
            maps: a.maps.iter().zip(&b.maps).map(|(x, y)| x.block_diag(y)).collect(),
        }
    }

    pub fn direct_sum_all<'a>(&self, dims: &[usize], parts: impl IntoIterator<Item = &'a FiniteModule>) -> FiniteModule {
        let zero: Vec<usize> = vec![0; dims.len()];
        let mut acc = self.zero_module(&zero);
        for p in parts {
            acc = self.direct_sum(&acc, p);
        }
        acc
    }

    /// Basis of `Hom(m, n)` over `F_q`.
    pub fn hom_basis(&self, m: &FiniteModule, n: &FiniteModule) -> Vec<Morphism> {
        let (k, unknowns) = self.hom_system(m, n);
        let ns = if k.rows == 0 {
            (0..unknowns.len())
                .map(|j| {
                    let mut e = vec![0u8; unknowns.len()];
                    e[j] = 1;
                    e
                })
                .collect()
        } else {
            k.nullspace(&self.base)
        };
        ns.iter().map(|x| self.morphism_from_coords(m, n, &unknowns, x)).collect()
    }

    pub fn hom_dim(&self, m: &FiniteModule, n: &FiniteModule) -> usize {
        let (k, unknowns) = self.hom_system(m, n);
        if k.rows == 0 {
            return unknowns.len();
        }
        unknowns.len() - k.rank(&self.base)
    }

    pub fn end_basis(&self, m: &FiniteModule) -> Vec<Morphism> {
        self.hom_basis(m, m)
    }

    /// Dimension of `Ext¹(m, n)`, from the Euler form of the hereditary category.
    pub fn ext_dim(&self, m: &FiniteModule, n: &FiniteModule) -> usize {
        let x: Vec<i64> = m.dims.iter().map(|&a| a as i64).collect();
        let y: Vec<i64> = n.dims.iter().map(|&a| a as i64).collect();
        let e = crate::cartan::euler_form(&self.quiver, &x, &y);
        (self.hom_dim(m, n) as i64 - e) as usize
    }

    /// Unknowns are `(vertex, row block a, column block b, power c)`.
    fn hom_system(&self, m: &FiniteModule, n: &FiniteModule) -> (FMat, Vec<(usize, usize, usize, usize)>) {
        let f = &self.base;
        let mut unknowns = Vec::new();
        for i in 0..self.n() {
            for a in 0..n.dims[i] {
                for b in 0..m.dims[i] {
                    for c in 0..self.d(i) {
                        unknowns.push((i, a, b, c));
                    }
                }
            }
        }
        let mut offsets = Vec::new();
        let mut rows = 0;
        for s in &self.strands {
            offsets.push(rows);
            rows += self.fq_dim(s.target, n.dims[s.target]) * self.fq_dim(s.source, m.dims[s.source]);
        }
        let mut k = FMat::zeros(rows, unknowns.len());
        for (col, &(i, a, b, c)) in unknowns.iter().enumerate() {
            let cp = &self.comp_pows[i][c];
            let di = self.d(i);
            for (h, s) in self.strands.iter().enumerate() {
                let width = self.fq_dim(s.source, m.dims[s.source]);
                let height = self.fq_dim(s.target, n.dims[s.target]);
                if s.source == i {
                    // N_h · (E_ab ⊗ C^c) occupies column block b.
                    let nh = &n.maps[h];
                    for r in 0..height {
                        for j in 0..di {
                            let mut acc = 0u8;
                            for t in 0..di {
                                let x = nh.get(r, a * di + t);
                                let y = cp.get(t, j);
                                if x != 0 && y != 0 {
                                    acc = f.add(acc, f.mul(x, y));
                                }
                            }
                            if acc != 0 {
                                let idx = offsets[h] + r * width + b * di + j;
                                let cur = k.get(idx, col);
                                k.set(idx, col, f.add(cur, acc));
                            }
                        }
                    }
                }
                if s.target == i {
                    // −(E_ab ⊗ C^c) · M_h occupies row block a.
                    let mh = &m.maps[h];
                    for t in 0..di {
                        for cc in 0..width {
                            let mut acc = 0u8;
                            for j in 0..di {
                                let x = cp.get(t, j);
                                let y = mh.get(b * di + j, cc);
                                if x != 0 && y != 0 {
                                    acc = f.add(acc, f.mul(x, y));
                                }
                            }
                            if acc != 0 {
                                let idx = offsets[h] + (a * di + t) * width + cc;
                                let cur = k.get(idx, col);
                                k.set(idx, col, f.sub(cur, acc));
                            }
                        }
                    }
                }
            }
        }
        (k, unknowns)
    }

    fn morphism_from_coords(
        &self,
        m: &FiniteModule,
        n: &FiniteModule,
        unknowns: &[(usize, usize, usize, usize)],
        x: &[u8],
    ) -> Morphism {
        let mut blocks: Vec<FMat> = (0..self.n())
            .map(|i| FMat::zeros(self.fq_dim(i, n.dims[i]), self.fq_dim(i, m.dims[i])))
            .collect();
        for (&(i, a, b, c), &coef) in unknowns.iter().zip(x) {
            if coef == 0 {
                continue;
            }
            let di = self.d(i);
            let cp = &self.comp_pows[i][c];
            for t in 0..di {
                for j in 0..di {
                    let y = cp.get(t, j);
                    if y != 0 {
                        let (r, cc) = (a * di + t, b * di + j);
                        let cur = blocks[i].get(r, cc);
                        blocks[i].set(r, cc, self.base.add(cur, self.base.mul(coef, y)));
                    }
                }
            }
        }
        Morphism(blocks)
    }

    pub fn is_homomorphism(&self, m: &FiniteModule, n: &FiniteModule, f: &Morphism) -> bool {
        self.strands.iter().enumerate().all(|(h, s)| {
            n.maps[h].mul(&self.base, &f.0[s.source]) == f.0[s.target].mul(&self.base, &m.maps[h])
        })
    }
}

impl Morphism {
    pub fn identity(sp: &Species, m: &FiniteModule) -> Self {
        Self((0..sp.n()).map(|i| FMat::identity(sp.fq_dim(i, m.dims[i]))).collect())
    }

    /// `self ∘ g`.
    pub fn after(&self, f: &Gf, g: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&g.0).map(|(a, b)| a.mul(f, b)).collect())
    }

    pub fn add(&self, f: &Gf, o: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&o.0).map(|(a, b)| a.add(f, b)).collect())
    }

    pub fn scale(&self, f: &Gf, c: u8) -> Morphism {
        Morphism(self.0.iter().map(|a| a.scale(f, c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| b.is_zero())
    }

    pub fn is_invertible(&self, f: &Gf) -> bool {
        self.0.iter().all(|b| b.rows == 0 || b.is_invertible(f))
    }

    /// Each vertex block raised to its own size, which is enough to reach the
    /// Fitting decomposition.
    pub fn fitting_power(&self, f: &Gf) -> Morphism {
        Morphism(self.0.iter().map(|b| b.pow(f, b.rows.max(1))).collect())
    }

    pub fn is_nilpotent(&self, f: &Gf) -> bool {
        self.fitting_power(f).is_zero()
    }
}

fn cyclic_quiver(r: usize) -> Result<ValuedQuiver> {
    if r == 0 {
        return Err(Error::Domain("cyclic quiver needs r ≥ 1".into()));
    }
    Ok(ValuedQuiver {
        names: (1..=r).map(|i| i.to_string()).collect(),
        d: vec![1; r],
        arrows: (0..r)
            .map(|i| crate::cartan::ValuedArrow {
                id: format!("a{}", i + 1),
                source: i,
                target: (i + 1) % r,
                m: 1,
            })
            .collect(),
    })
}
