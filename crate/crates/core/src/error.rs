use std::fmt;

use crate::metrics::MetricKind;

/// Errors produced by the library and surfaced by the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("metric {metric} does not apply to {object}")]
    KindMismatch { metric: MetricKind, object: ObjectKind },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short code for machine-readable error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NonFinite => "non-finite",
            Error::ZeroDimension => "zero-dimension",
            Error::Empty(_) => "empty",
            Error::NegativeRadius(_) => "negative-radius",
            Error::KindMismatch { .. } => "kind-mismatch",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Curve,
    PointSet,
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectKind::Curve => f.write_str("curve"),
            ObjectKind::PointSet => f.write_str("pointset"),
        }
    }
}
