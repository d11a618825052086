use std::path::PathBuf;

use crate::validate::ValidationReport;

/// Errors raised by the polariton engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input:\n{0}")]
    Validation(ValidationReport),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("matrix dimension {requested} exceeds the configured maximum {max}")]
    DimensionOverflow { requested: usize, max: usize },

    #[error("eigensolver did not converge for a {dim}x{dim} matrix (max |entry| = {max_abs:.6e}, diagonal span = {diag_span:.6e})")]
    NonConvergence {
        dim: usize,
        max_abs: f64,
        diag_span: f64,
    },

    #[error("ultrastrong instability: force-constant eigenvalue {eigenvalue:.6e} eV^2 at state {state} is below -1e-10")]
    UltrastrongInstability { state: usize, eigenvalue: f64 },

    #[error("zero-frequency polariton at state {state} (eigenvalue {eigenvalue:.6e} eV^2)")]
    ZeroFrequency { state: usize, eigenvalue: f64 },

    #[error("bath window too small: coverage {coverage:.4} < 0.5; increase window_halfwidth_eV (currently {window} eV)")]
    BathWindowTooSmall { coverage: f64, window: f64 },

    #[error(
        "cavity decoupled: no state qualifies as lower polariton at weight threshold {threshold:e}"
    )]
    CavityDecoupled { threshold: f64 },

    #[error("at lambda = {lambda} eV^1/2/nm: {source}")]
    AtCoupling {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    /// Coarse classification used for process exit codes and C error codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Validation(_) | Error::InvalidArgument(_) | Error::Parse { .. } => {
                ErrorKind::Validation
            }
            Error::BathWindowTooSmall { .. } => ErrorKind::Validation,
            Error::DimensionOverflow { .. }
            | Error::NonConvergence { .. }
            | Error::UltrastrongInstability { .. }
            | Error::ZeroFrequency { .. }
            | Error::CavityDecoupled { .. } => ErrorKind::Solver,
            Error::AtCoupling { source, .. } => source.kind(),
            Error::Io { .. } => ErrorKind::Io,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Solver,
    Io,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
