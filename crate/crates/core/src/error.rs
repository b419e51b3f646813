use thiserror::Error;

/// Crate-wide error type.
///
/// Variants split into argument/shape problems (bad dimensions, unparsable
/// input) and numerical invariant violations (loss of Hermiticity,
/// positivity, normalization or convergence). The CLI maps the former to
/// exit code 2 and the latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {deviation:.3e}, tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e} below the clamping floor)")]
    NotPositive(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("state vector is not normalized (|norm - 1| = {0:.3e})")]
    NotNormalized(f64),

    #[error("non-finite value")]
    NonFinite,

    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that indicate a broken numerical invariant rather
    /// than a caller mistake.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPositive(_)
                | Error::NoConvergence(_)
                | Error::NotNormalized(_)
                | Error::NonFinite
                | Error::InvariantViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
