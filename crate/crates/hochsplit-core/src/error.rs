//! Error types shared across the library.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// The element does not annihilate the character within tolerance, so
    /// Blaschke division / maximal-ideal machinery cannot be applied to it.
    #[error("not in the maximal ideal: |phi(f)| = {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotInIdeal { deviation: f64, tolerance: f64 },

    /// A window was too small to compute every requested entry exactly.
    #[error("window {window} too small: {needed} required for {context}")]
    WindowTooSmall {
        window: usize,
        needed: usize,
        context: &'static str,
    },

    /// A point that must lie strictly inside the unit disc does not.
    #[error("point with |lambda|^2 = {modulus_sq} is not in the open unit disc")]
    PointNotInterior { modulus_sq: f64 },

    /// A point that must lie in the closed unit disc does not.
    #[error("point with |lambda|^2 = {modulus_sq} is outside the closed unit disc")]
    PointNotInDisc { modulus_sq: f64 },

    /// A half-plane point with Im(lambda) <= 0.
    #[error("point with Im(lambda) = {imag} is not in the open upper half plane")]
    PointNotInHalfPlane { imag: f64 },

    /// A chain of step sizes violates the divisibility order.
    #[error("chain not refining: {coarse} is not an integer multiple of {fine}")]
    ChainNotRefining { coarse: String, fine: String },

    /// Two grid discretizations cannot be combined.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A construction received an argument outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
