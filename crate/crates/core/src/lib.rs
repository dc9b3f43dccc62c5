//! Numerical analysis of Petrovskii parabolic initial-boundary-value problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`] - complex polynomial symbols, determinants, adjugates,
//!   univariate root finding and numerical rank;
//! * [`expr`] - the small expression language used for PDO coefficients and
//!   function parameters;
//! * [`problem`] and [`geometry`] - the problem model and its sample points;
//! * [`parabolicity`] - sampled checks of the parabolicity, normalization and
//!   covering conditions;
//! * [`hormander`] - anisotropic weights, function parameters, the Dini-type
//!   integral test and spectral norms of grid functions;
//! * [`regularity`] - the decision procedure that turns declared regularity
//!   of the right-hand sides into continuity of solution derivatives.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod hormander;
pub mod parabolicity;
pub mod problem;
pub mod regularity;
pub mod symbolic;

pub use error::{Error, Result};
pub use num_complex::Complex64;
