//! Defect classes, regular simples, tubes, and the field-independent "type"
//! of an isoclass used to compare catalogs over different fields.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::catalog::{Catalog, Oracle};
use crate::cartan::{apply_rational, cartan_of, coxeter_matrix, euler_form, ValuedQuiver};
use crate::error::{Error, Result};
use crate::laurent::rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DefectClass {
    Preprojective,
    Regular,
    Preinjective,
}

/// `∂(x) = ⟨δ, x⟩`.
pub fn defect(g: &ValuedQuiver, delta: &[i64], x: &[i64]) -> i64 {
    euler_form(g, delta, x)
}

/// Negative defect is preprojective.
pub fn defect_class(g: &ValuedQuiver, x: &[i64]) -> Result<DefectClass> {
    let datum = cartan_of(g);
    if !datum.is_affine() {
        return Err(Error::Domain("defect classes need an affine datum".into()));
    }
    let delta = datum.min_delta()?;
    Ok(match defect(g, &delta, x) {
        d if d < 0 => DefectClass::Preprojective,
        0 => DefectClass::Regular,
        _ => DefectClass::Preinjective,
    })
}

/// Field-independent name of an indecomposable (homogeneous tubes excepted).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Indecomposable of a finite-type quiver.
    Root(Vec<i64>),
    Pre(Vec<i64>),
    Inj(Vec<i64>),
    /// Regular top `τ^top L_0` and regular length in a nonhomogeneous tube.
    Tube { tube: usize, top: usize, len: usize },
    /// Homogeneous tube `tube` (numbering is per field).
    Homog { tube: usize, degree: usize, len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NhTube {
    /// Regular simples `L_0, τL_0, …` as indecomposable ids.
    pub simples: Vec<usize>,
    pub dims: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomTube {
    pub simple: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeStructure {
    pub delta: Option<Vec<i64>>,
    pub labels: Vec<Label>,
    pub defect: Vec<Option<DefectClass>>,
    pub nonhomogeneous: Vec<NhTube>,
    pub homogeneous: Vec<HomTube>,
}

/// Field-independent isoclass type: nonhomogeneous summands with
/// multiplicity, plus one `(residue degree, partition)` per homogeneous tube.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeKey {
    pub fixed: Vec<(Label, usize)>,
    pub homog: Vec<(usize, Vec<usize>)>,
}

impl TypeKey {
    pub fn zero() -> Self {
        Self { fixed: Vec::new(), homog: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.fixed.is_empty() && self.homog.is_empty()
    }
}

fn idims(d: &[usize]) -> Vec<i64> {
    d.iter().map(|&x| x as i64).collect()
}

fn total(d: &[usize]) -> usize {
    d.iter().sum()
}

impl TubeStructure {
    pub fn build(o: &Oracle) -> Result<Self> {
        let cat = &o.catalog;
        if cat.cyclic {
            return Ok(Self::cyclic(o));
        }
        let g = &cat.quiver;
        let datum = cartan_of(g);
        let n = cat.indecs.len();
        if !datum.is_affine() {
            return Ok(Self {
                delta: None,
                labels: cat.indecs.iter().map(|x| Label::Root(idims(&x.module.dims))).collect(),
                defect: vec![None; n],
                nonhomogeneous: Vec::new(),
                homogeneous: Vec::new(),
            });
        }
        let delta = datum.min_delta()?;
        let dims: Vec<Vec<i64>> = cat.indecs.iter().map(|x| idims(&x.module.dims)).collect();
        if delta.iter().zip(&cat.cap).any(|(&d, &c)| d as usize > c) {
            return Err(Error::Domain(format!("cap {:?} does not contain δ = {delta:?}", cat.cap)));
        }
        let defect: Vec<DefectClass> = dims
            .iter()
            .map(|x| match euler_form(g, &delta, x) {
                d if d < 0 => DefectClass::Preprojective,
                0 => DefectClass::Regular,
                _ => DefectClass::Preinjective,
            })
            .collect();
        let regular: Vec<usize> = (0..n).filter(|&a| defect[a] == DefectClass::Regular).collect();
        let simples: Vec<usize> = regular
            .iter()
            .copied()
            .filter(|&x| {
                let tx = total(&cat.indecs[x].module.dims);
                !regular.iter().any(|&y| total(&cat.indecs[y].module.dims) < tx && cat.hom[y][x] != 0)
            })
            .collect();
        let ext = |a: usize, b: usize| cat.hom[a][b] as i64 - euler_form(g, &dims[a], &dims[b]);
        let phi = coxeter_matrix(g);
        let mut tau = BTreeMap::new();
        for &l in &simples {
            let cands: Vec<usize> = simples.iter().copied().filter(|&m| ext(l, m) != 0).collect();
            if cands.len() != 1 {
                return Err(Error::Domain(format!(
                    "regular simple of dimension {:?} has {} translate candidates; cap too small",
                    dims[l],
                    cands.len()
                )));
            }
            let t = cands[0];
            let predicted = apply_rational(&phi, &dims[l]);
            if predicted != dims[t].iter().map(|&x| rat(x)).collect::<Vec<_>>() {
                return Err(Error::Verification(format!("τ of {:?} disagrees with the Coxeter matrix", dims[l])));
            }
            tau.insert(l, t);
        }
        let mut seen = BTreeMap::new();
        let mut nonhomogeneous = Vec::new();
        let mut homogeneous = Vec::new();
        for &l in &simples {
            if seen.contains_key(&l) {
                continue;
            }
            let mut orbit = vec![l];
            let mut x = tau[&l];
            while x != l {
                orbit.push(x);
                x = tau[&x];
            }
            for &y in &orbit {
                seen.insert(y, ());
            }
            if orbit.len() == 1 {
                homogeneous.push(HomTube { simple: l, degree: cat.indecs[l].residue_degree });
            } else {
                let start = (0..orbit.len()).min_by_key(|&k| dims[orbit[k]].clone()).unwrap();
                orbit.rotate_left(start);
                nonhomogeneous.push(NhTube { dims: orbit.iter().map(|&y| dims[y].clone()).collect(), simples: orbit });
            }
        }
        nonhomogeneous.sort_by_key(|t| {
            let mut d = t.dims.clone();
            d.sort();
            d
        });
        let mut labels = Vec::with_capacity(n);
        for a in 0..n {
            labels.push(match defect[a] {
                DefectClass::Preprojective => Label::Pre(dims[a].clone()),
                DefectClass::Preinjective => Label::Inj(dims[a].clone()),
                DefectClass::Regular => Self::regular_label(cat, &dims, &nonhomogeneous, &homogeneous, a)?,
            });
        }
        Ok(Self {
            delta: Some(delta),
            labels,
            defect: defect.into_iter().map(Some).collect(),
            nonhomogeneous,
            homogeneous,
        })
    }

    fn regular_label(cat: &Catalog, dims: &[Vec<i64>], nh: &[NhTube], hom: &[HomTube], a: usize) -> Result<Label> {
        for (k, t) in hom.iter().enumerate() {
            if cat.hom[t.simple][a] != 0 {
                let len = total(&cat.indecs[a].module.dims) / total(&cat.indecs[t.simple].module.dims);
                return Ok(Label::Homog { tube: k, degree: t.degree, len });
            }
        }
        for (k, t) in nh.iter().enumerate() {
            if !t.simples.iter().any(|&s| cat.hom[s][a] != 0) {
                continue;
            }
            let top = t
                .simples
                .iter()
                .position(|&s| cat.hom[a][s] != 0)
                .ok_or_else(|| Error::Internal("regular module without regular top".into()))?;
            let r = t.simples.len();
            let mut acc = vec![0i64; dims[a].len()];
            for len in 1..=total(&cat.indecs[a].module.dims) {
                for (x, y) in acc.iter_mut().zip(&t.dims[(top + len - 1) % r]) {
                    *x += y;
                }
                if acc == dims[a] {
                    return Ok(Label::Tube { tube: k, top, len });
                }
            }
            return Err(Error::Internal(format!("regular length of {:?} not found", dims[a])));
        }
        Err(Error::Internal(format!("regular module {:?} lies in no tube", dims[a])))
    }

    fn cyclic(o: &Oracle) -> Self {
        let cat = &o.catalog;
        let sp = &o.species;
        let r = sp.n();
        let simples: Vec<usize> = (0..r)
            .map(|i| cat.indecs.iter().position(|x| x.module == sp.simple(i)).expect("simple in catalog"))
            .collect();
        let labels = cat
            .indecs
            .iter()
            .map(|x| {
                let top = (0..r).find(|&i| sp.hom_dim(&x.module, &sp.simple(i)) != 0).expect("nilpotent module has a top");
                Label::Tube { tube: 0, top, len: total(&x.module.dims) }
            })
            .collect();
        Self {
            delta: Some(vec![1; r]),
            labels,
            defect: vec![Some(DefectClass::Regular); cat.indecs.len()],
            nonhomogeneous: vec![NhTube { dims: (0..r).map(|i| idims(&sp.simple(i).dims)).collect(), simples }],
            homogeneous: Vec::new(),
        }
    }

    pub fn type_of(&self, cat: &Catalog, class: usize) -> TypeKey {
        let mut fixed: BTreeMap<Label, usize> = BTreeMap::new();
        let mut tubes: BTreeMap<usize, (usize, Vec<usize>)> = BTreeMap::new();
        for &(a, m) in &cat.classes[class].parts {
            match &self.labels[a] {
                Label::Homog { tube, degree, len } => {
                    let e = tubes.entry(*tube).or_insert((*degree, Vec::new()));
                    e.1.extend(std::iter::repeat_n(*len, m));
                }
                l => *fixed.entry(l.clone()).or_insert(0) += m,
            }
        }
        let mut homog: Vec<(usize, Vec<usize>)> = tubes
            .into_values()
            .map(|(d, mut p)| {
                p.sort_unstable_by(|a, b| b.cmp(a));
                (d, p)
            })
            .collect();
        homog.sort();
        TypeKey { fixed: fixed.into_iter().collect(), homog }
    }

    /// Classes grouped by type.
    pub fn types(&self, cat: &Catalog) -> BTreeMap<TypeKey, Vec<usize>> {
        let mut m: BTreeMap<TypeKey, Vec<usize>> = BTreeMap::new();
        for k in 0..cat.classes.len() {
            m.entry(self.type_of(cat, k)).or_default().push(k);
        }
        m
    }

    /// Homogeneous regular classes of the given dimension.
    pub fn homogeneous_classes(&self, cat: &Catalog, dims: &[usize]) -> Vec<usize> {
        cat.classes_of_dim(dims)
            .into_iter()
            .filter(|&k| cat.classes[k].parts.iter().all(|&(a, _)| matches!(self.labels[a], Label::Homog { .. })))
            .collect()
    }
}
