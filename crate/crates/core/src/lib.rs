//! Numerical analysis of band operators on `l^p(Z, C^d)`.
//!
//! The crate computes operator norms, lower norms, essential norms, the
//! compression limits `mu~` and `mu`, (essential) pseudospectra, limit
//! operators and finite-section stability data for band operators whose
//! diagonals are constant, periodic, eventually periodic or seeded-random.
//!
//! * [`linalg`] — dense complex kernel (one-sided Jacobi SVD, solves, p-norms).
//! * [`operator`] — band operators, their algebra and finite compressions.
//! * [`limitops`] — operator spectrum of eventually periodic operators and
//!   the Laurent-symbol oracle for periodic operators.
//! * [`norms`] — norm-type functionals (localized norm, essential norm,
//!   lower norm, `mu~`, `mu`, resolvent values).
//! * [`pseudospec`] — grids of reciprocal resolvent norms, level sets,
//!   Hausdorff diagnostics, rank-one perturbation witnesses.
//! * [`finsec`] — finite sections, stability spectrum and the limsup identities.
//! * [`spec_file`] — JSON operator specification files.
//! * [`corpus`] — the operators used by the test and acceptance suites.

pub mod corpus;
pub mod error;
pub mod finsec;
pub mod limitops;
pub mod linalg;
pub mod norms;
pub mod operator;
pub mod pseudospec;
pub mod spec_file;
pub(crate) mod util;

pub use error::{Error, Result};
pub use linalg::{Exponent, Matrix};
pub use num_complex::Complex64;
pub use operator::{BandOperator, DiagonalSymbol, Interval, Law, Tail, WindowCompression, WindowVector};
