//! Exact linear algebra over prime fields.

pub(crate) mod bits;
mod field;
mod matrix;

pub use field::{FieldSpec, MAX_MODULUS};
pub use matrix::{Echelon, FMatrix};
