//! Polynomial algebra over the complex numbers.

mod matrix;
mod poly;
mod rank;
mod roots;
mod univariate;

pub use matrix::{adjugate_poly_matrix, det_poly_matrix, PolyMatrix};
pub use poly::{ExponentKey, PolySymbol, PRUNE_THRESHOLD};
pub use rank::{numeric_rank, singular_values};
pub use roots::{poly_roots, RootSet, DEFAULT_CLUSTER_TOL};
pub use univariate::{poly_mod, UniPoly};
