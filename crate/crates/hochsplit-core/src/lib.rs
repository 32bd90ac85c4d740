//! Splitting maps for Hochschild point cohomology of l1 convolution algebras
//! on totally ordered semigroups, at finite truncation with certified error
//! budgets.
//!
//! The crate verifies, numerically and in an exact rational mode, the
//! uniform-norm constants attached to those maps: the Blaschke norm
//! `1 + 2|lambda|`, the projectivity constant `(1 + 2|lambda|)^2`, the
//! flatness constant `9` for rational semigroups and the half line, and the
//! splitting-map constant `10`.
//!
//! Modules
//! - [`series`]: truncated l1(Z+) convolution algebra, Blaschke factor
//!   machinery, certified tail arithmetic.
//! - [`cochain`]: Hochschild cochains on the truncated algebra, the
//!   coboundary operator, exact sup norms.
//! - [`discsplit`]: the splitting maps for interior disc points, norm audits,
//!   the cocycle stabilizer, and the peak-point delta-net splitting.
//! - [`rational`]: l1 of the nonnegative part of a dense subgroup of Q with
//!   exact rational supports; discretization projections and flatness
//!   witnesses.
//! - [`halfline`]: discretized L1(R+) / measure-algebra computations for the
//!   half-line kernels and their flatness witness.

pub mod cochain;
pub mod discsplit;
pub mod error;
pub mod halfline;
pub mod rational;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{ExactComplex, RealScalar, Scalar};
pub use series::{DiscPoint, TensorSeries, TruncatedSeries};
