use thiserror::Error;

/// Errors produced by state validation, linear algebra and ensemble statistics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error(
        "Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid measurement basis angles (theta={theta}, phi={phi})")]
    InvalidAngles { theta: f64, phi: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("classification inconsistency: {0}")]
    ClassificationInconsistency(String),

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
