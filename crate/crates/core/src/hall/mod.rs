pub mod field;
pub mod generic;
pub mod poly;

pub use field::{FieldElement, FieldHall};
pub use generic::{FitOptions, HallElement, TypeAlgebra, TypeInfo};
pub use poly::HallPolynomial;
