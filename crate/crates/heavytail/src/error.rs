//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An inverse draw hit a near-singular factor and should be resampled.
    NearSingular { cond: f64 },
    /// Eigenvalues requested from a matrix without a Hermitian structure tag.
    NonHermitianInput,
    /// No contour separates the left and right pole families of a Meijer G
    /// integrand with the given parameter lists.
    ContourSeparation { detail: String },
    /// An iterative evaluation did not meet its truncation bound within the
    /// iteration cap.
    NonConvergence { what: String },
    /// A run configuration failed validation.
    InvalidConfig { detail: String },
    /// An eigenvalue cache exists but its header does not match the request.
    CacheMismatch { detail: String },
    /// Filesystem trouble while reading or writing experiment outputs.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NearSingular { cond } => {
                write!(f, "near-singular factor (condition estimate {cond:.3e})")
            }
            Error::NonHermitianInput => write!(f, "eigenvalues need a Hermitian structure tag"),
            Error::ContourSeparation { detail } => {
                write!(f, "no separating Mellin contour: {detail}")
            }
            Error::NonConvergence { what } => write!(f, "did not converge: {what}"),
            Error::InvalidConfig { detail } => write!(f, "invalid configuration: {detail}"),
            Error::CacheMismatch { detail } => write!(f, "cache mismatch: {detail}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
