//! The roots `β_t` of an admissible sequence against the indecomposables of a
//! finite-field catalog.

use serde::Serialize;

use super::catalog::{CatalogOptions, Oracle};
use super::tubes::{defect_class, DefectClass};
use crate::cartan::{admissible_of, beta, cartan_of, AdmissibleSequence};
use crate::context::Context;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RootEntry {
    pub t: i64,
    pub vertex: usize,
    pub beta: Vec<i64>,
    /// `None` for finite type.
    pub predicted: Option<DefectClass>,
    pub observed: Option<DefectClass>,
    /// Catalog indecomposables with dimension vector `β_t`.
    pub matches: usize,
}

impl RootEntry {
    pub fn passed(&self) -> bool {
        self.matches == 1 && self.predicted == self.observed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub context: String,
    pub q: u32,
    pub window: i64,
    pub cap: Vec<usize>,
    pub entries: Vec<RootEntry>,
    /// Ordered pairs `t₁ < t₂` on one side of zero whose Hom and Ext were checked.
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl RootReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.entries.iter().all(|e| e.passed())
    }
}

fn positive(b: &[i64]) -> bool {
    b.iter().all(|&x| x >= 0) && b.iter().any(|&x| x > 0)
}

/// `β_t` for `|t| ≤ window` (finite type: until a root repeats or turns negative).
pub fn roots_in_window(ctx: &Context, window: i64) -> Result<Vec<(i64, usize, Vec<i64>)>> {
    let Context::Quiver { quiver, .. } = ctx else {
        return Err(Error::Unsupported("roots need an acyclic valued quiver".into()));
    };
    let datum = cartan_of(quiver);
    let affine = datum.is_affine();
    let seq = if affine {
        admissible_of(quiver)?
    } else {
        quiver.validate()?;
        AdmissibleSequence { base_order: quiver.sink_order() }
    };
    let mut out = Vec::new();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    for side in [-1i64, 1] {
        let range: Vec<i64> = if side < 0 { (0..=window).map(|k| -k).collect() } else { (1..=window).collect() };
        for t in range {
            let b = match beta(&seq, &datum, t) {
                Ok(b) => b,
                Err(_) if !affine => break,
                Err(e) => return Err(e),
            };
            if !positive(&b) || seen.contains(&b) {
                if affine {
                    return Err(Error::Verification(format!("β_{t} = {b:?} is not a new positive root")));
                }
                break;
            }
            seen.push(b.clone());
            out.push((t, seq.at(t), b));
        }
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}

/// Matches each `β_t` against the catalog over `F_q` and checks
/// `Hom(M(β_{t₁}), M(β_{t₂})) = 0 = Ext¹(M(β_{t₂}), M(β_{t₁}))` for `t₁ < t₂` on one side.
pub fn root_table(ctx: &Context, window: i64, q: u32, opts: &CatalogOptions) -> Result<RootReport> {
    let roots = roots_in_window(ctx, window)?;
    let n = ctx.n();
    let mut cap = vec![0usize; n];
    for (_, _, b) in &roots {
        for (c, &x) in cap.iter_mut().zip(b) {
            *c = (*c).max(x as usize);
        }
    }
    let sp = ctx.species(q)?;
    let mut opts = opts.clone();
    opts.budget = opts.budget.max(sp.total_fq_dim(&cap));
    let oracle = Oracle::build(sp, &cap, &opts)?;
    let cat = &oracle.catalog;
    let Context::Quiver { quiver, .. } = ctx else { unreachable!("checked by roots_in_window") };
    let affine = cartan_of(quiver).is_affine();
    let mut rep = RootReport {
        context: ctx.name().to_string(),
        q,
        window,
        cap: cap.clone(),
        entries: Vec::new(),
        pairs: 0,
        failures: Vec::new(),
    };
    let mut module_of: Vec<Option<usize>> = Vec::new();
    for (t, vertex, b) in &roots {
        let dims: Vec<usize> = b.iter().map(|&x| x as usize).collect();
        let found = cat.indecs_of_dim(&dims);
        let predicted = affine.then_some(if *t <= 0 { DefectClass::Preprojective } else { DefectClass::Preinjective });
        let observed = if affine { Some(defect_class(quiver, b)?) } else { None };
        let entry = RootEntry { t: *t, vertex: *vertex, beta: b.clone(), predicted, observed, matches: found.len() };
        if !entry.passed() {
            rep.failures.push(format!("β_{t} = {b:?}: {} indecomposables, defect {observed:?}", found.len()));
        }
        module_of.push((found.len() == 1).then(|| found[0]));
        rep.entries.push(entry);
    }
    for (x, (t1, _, _)) in roots.iter().enumerate() {
        for (y, (t2, _, _)) in roots.iter().enumerate() {
            let same_side = (*t2 <= 0) == (*t1 <= 0);
            if t1 >= t2 || !same_side {
                continue;
            }
            let (Some(a), Some(b)) = (module_of[x], module_of[y]) else { continue };
            rep.pairs += 1;
            if cat.hom[a][b] != 0 {
                rep.failures.push(format!("Hom(M(β_{t1}), M(β_{t2})) has dimension {}", cat.hom[a][b]));
            }
            let ext = oracle.species.ext_dim(&cat.indecs[b].module, &cat.indecs[a].module);
            if ext != 0 {
                rep.failures.push(format!("Ext¹(M(β_{t2}), M(β_{t1})) has dimension {ext}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_window_three() {
        let ctx: Context = "kronecker".parse().unwrap();
        let rep = root_table(&ctx, 3, 2, &CatalogOptions::default()).unwrap();
        let betas: Vec<(i64, Vec<i64>)> = rep.entries.iter().map(|e| (e.t, e.beta.clone())).collect();
        assert_eq!(betas[0], (-3, vec![3, 4]));
        assert_eq!(betas[3], (0, vec![0, 1]));
        assert_eq!(betas[4], (1, vec![1, 0]));
        assert_eq!(betas[6], (3, vec![3, 2]));
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.pairs, 6 + 3);
    }

    #[test]
    fn finite_type_stops() {
        let ctx: Context = "a2".parse().unwrap();
        let roots = roots_in_window(&ctx, 10).unwrap();
        assert_eq!(roots.len(), 3);
        let rep = root_table(&ctx, 10, 2, &CatalogOptions::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn cyclic_is_rejected() {
        assert!(roots_in_window(&"cyclic:2".parse().unwrap(), 2).is_err());
    }
}
