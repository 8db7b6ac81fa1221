//! Finite-field module oracle: species representations, Hom/Ext/End,
//! Krull–Schmidt decomposition, complete iso-class catalogs, Hall numbers by
//! submodule enumeration, defect classes and tube discovery.

pub mod cache;
pub mod catalog;
pub mod decompose;
pub mod hallnum;
pub mod species;
pub mod roots;
pub mod tubes;

pub use catalog::{Catalog, CatalogOptions, IsoClass, Indecomposable, Oracle};
pub use species::{FiniteModule, Morphism, Species};
