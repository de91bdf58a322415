use thiserror::Error;

use crate::Scalar;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the circulant algebra, the spectral transform and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("non-finite value in {0}")]
    NonFiniteInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    /// The simultaneous root iteration did not settle. `equation` is the
    /// 0-based index of the scalar equation when raised from the solver.
    #[error(
        "root iteration did not converge after {iterations} iterations{}",
        equation.map(|i| format!(" (scalar equation {})", i + 1)).unwrap_or_default()
    )]
    NoConvergence {
        equation: Option<usize>,
        iterations: usize,
        best: Vec<Scalar>,
        residuals: Vec<f64>,
    },

    #[error("solution {selection:?} has residual {residual:e} above threshold {threshold:e}")]
    ResidualExceeded {
        selection: Vec<usize>,
        residual: f64,
        threshold: f64,
    },

    #[error("solution count does not fit in 128 bits")]
    CountOverflow,
}

impl Error {
    pub(crate) fn non_finite(context: impl Into<String>) -> Self {
        Error::NonFiniteInput(context.into())
    }

    /// Tag a root-finding failure with the scalar equation it came from.
    pub(crate) fn at_equation(self, index: usize) -> Self {
        match self {
            Error::NoConvergence {
                iterations,
                best,
                residuals,
                ..
            } => Error::NoConvergence {
                equation: Some(index),
                iterations,
                best,
                residuals,
            },
            other => other,
        }
    }
}
