//! Generalized Hamming weights of incidence-matrix codes and Reed–Muller-type
//! evaluation codes over graphs, together with the edge-deletion invariants
//! that determine them.
//!
//! For a connected graph `G` and a prime `p`, the r-th generalized Hamming
//! weight of the code spanned by the rows of the incidence matrix equals the
//! r-th weak edge biparticity when `p != 2` and `G` is not bipartite, and the
//! r-th edge connectivity otherwise. This crate computes both sides
//! independently so that the equality can be checked on any input.

pub mod codes;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod verify;

pub use codes::{
    gaussian_binomial, wei_complete, LinearCode, Method, WeightHierarchy, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use eval::{DeltaMethod, FormDomain, Monomial, PointSet};
pub use graph::{Bipartition, EdgeSet, Graph};
pub use invariants::{InvariantResult, Sign, SignAssignment};
pub use linalg::{FMatrix, FieldSpec};
