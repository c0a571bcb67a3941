use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pressure law: {0}")]
    InvalidPressureLaw(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite sample at {location}")]
    NonFinite { location: String },

    #[error("positivity of 1 + tau lost at {side} cell {cell} (t = {t}, tau = {tau})")]
    PositivityLost {
        side: &'static str,
        cell: usize,
        t: f64,
        tau: f64,
    },

    #[error("Newton iteration did not converge at t = {t} (residual {residual:e})")]
    NewtonFailure { t: f64, residual: f64 },

    #[error("singular tridiagonal system at row {0}")]
    SingularSystem(usize),

    #[error("mass/viscosity ratio {0} overflows exp(M/nu)")]
    MassOverflow(f64),

    #[error("evaluation at x = 0 is not supported; probe x = +/-eps instead")]
    InterfaceEvaluation,

    #[error("accuracy unreachable: {0}")]
    AccuracyUnreachable(String),

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("configuration errors:\n{}", .0.join("\n"))]
    Config(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
