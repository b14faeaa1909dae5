//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum Error {
    /// A coupling set violates one of its structural constraints.
    #[error("constraint violation at index {index}: {what}")]
    Constraint { what: String, index: i64 },

    /// An argument lies outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical consistency check failed (quantity expected real,
    /// pairing residual too large, ...).
    #[error("numerical consistency: {0}")]
    Numerical(String),

    /// The root or cut structure of the spectral data is inconsistent
    /// with the model assumptions.
    #[error("structure error: {0}")]
    Structure(String),

    /// A Mobius map moved a root across the unit circle or broke the
    /// quartet structure.
    #[error("map not admissible: offending root {root}")]
    Admissibility { root: Complex64 },

    /// Evaluation at a pole of a Mobius map.
    #[error("pole of Mobius map at z = {z}")]
    Pole { z: Complex64 },

    /// A quadrature or series did not reach the requested accuracy.
    #[error("accuracy not reached: {0}")]
    Accuracy(String),

    /// The normalizing theta value vanishes.
    #[error("theta null: normalization value below threshold ({0:e})")]
    ThetaNull(f64),

    /// Two branch points are too close to treat as simple roots.
    #[error("degenerate roots: {0}")]
    Degenerate(String),

    /// The requested case is outside what the module supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A cycle path could not be realized or branch-tracked.
    #[error("integration error: {0}")]
    Integration(String),

    /// Root ordering does not match what the operation requires.
    #[error("ordering error: {0}")]
    Ordering(String),

    /// An asymptotic fit had too little or too noisy data.
    #[error("fit error: {0}")]
    Fit(String),

    /// The integration contour is invalid for the requested index.
    #[error("contour error: {0}")]
    Contour(String),

    /// Malformed input file or command line.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Usage(format!("malformed JSON: {e}"))
    }
}
