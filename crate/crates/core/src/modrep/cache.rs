//! On-disk catalog cache keyed by a hash of everything that determines the build.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::catalog::{Catalog, CatalogOptions, CATALOG_SCHEMA};
use super::species::Species;
use crate::cartan::ValuedQuiver;
use crate::error::Result;

#[derive(Serialize)]
struct KeyMaterial<'a> {
    schema: u32,
    quiver: String,
    cyclic: bool,
    q: u32,
    cap: &'a [usize],
    opts: &'a CatalogOptions,
}

pub fn cache_key(quiver: &ValuedQuiver, cyclic: bool, q: u32, cap: &[usize], opts: &CatalogOptions) -> String {
    let km = KeyMaterial { schema: CATALOG_SCHEMA, quiver: quiver.to_text(), cyclic, q, cap, opts };
    let bytes = serde_json::to_vec(&km).expect("key material serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn cache_path(dir: &Path, sp: &Species, cap: &[usize], opts: &CatalogOptions) -> PathBuf {
    let key = cache_key(&sp.quiver, sp.cyclic, sp.q(), cap, opts);
    dir.join(format!("catalog-{}.json", &key[..32]))
}

/// Loads a cached catalog, or builds and stores one. Without a directory this just builds.
pub fn load_or_build(sp: &Species, cap: &[usize], opts: &CatalogOptions, dir: Option<&Path>) -> Result<Catalog> {
    let Some(dir) = dir else {
        return Catalog::build(sp, cap, opts);
    };
    let path = cache_path(dir, sp, cap, opts);
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(mut cat) = serde_json::from_slice::<Catalog>(&bytes) {
            if cat.schema == CATALOG_SCHEMA && cat.q == sp.q() && cat.cap == cap {
                cat.reindex();
                return Ok(cat);
            }
        }
    }
    let cat = Catalog::build(sp, cap, opts)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&cat)?)?;
    fs::rename(&tmp, &path)?;
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_is_byte_identical() {
        let g = ValuedQuiver::parse("vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n").unwrap();
        let sp = Species::new(&g, 2).unwrap();
        let opts = CatalogOptions::default();
        let dir = tempfile::tempdir().unwrap();
        let a = load_or_build(&sp, &[2, 2], &opts, Some(dir.path())).unwrap();
        let path = cache_path(dir.path(), &sp, &[2, 2], &opts);
        let first = fs::read(&path).unwrap();
        let b = load_or_build(&sp, &[2, 2], &opts, Some(dir.path())).unwrap();
        assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
        assert_eq!(serde_json::to_vec(&b).unwrap(), first);
        assert_eq!(b.class_of_parts(&a.classes[5].parts), Some(5));
        let fresh = Catalog::build(&sp, &[2, 2], &opts).unwrap();
        assert_eq!(serde_json::to_vec(&fresh).unwrap(), first);
    }
}
