//! Exact computations in Ringel–Hall algebras of tame valued quivers and
//! cyclic quivers: finite-field module oracles, Hall polynomials, PBW,
//! monomial and bar-invariant bases, and Kashiwara operators.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod laurent;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, RationalV, SeriesTail};
pub mod gf;
pub mod linalg;
pub mod qsqrt;
pub mod cartan;
pub mod modrep;
pub mod context;
pub mod hall;
pub mod triangular;
pub mod cyclic;
pub mod symfun;
pub mod pbwbasis;
pub mod kashiwara;
pub mod verify;
