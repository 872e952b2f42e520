use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("timestamp {0} lies outside the trajectory domain")]
    OutOfDomain(f64),
    #[error("dimension {dim} out of range for a {dims}-dimensional trajectory")]
    BadDimension { dim: usize, dims: usize },
    #[error("trajectories do not share dimension count and time domain")]
    DomainMismatch,
    #[error("unknown metric: {0}")]
    BadMetric(String),
    #[error("error bound must be finite and non-negative, got {0}")]
    BadEpsilon(f64),
    #[error("sampling rate must be at least 1")]
    BadRate,
    #[error("trajectory is not in prefix form")]
    NotPrefixForm,
    #[error("compact stream ended prematurely")]
    TruncatedStream,
    #[error("bad magic bytes, not a compact trajectory stream")]
    BadMagic,
    #[error("unsupported compact stream version {0}")]
    UnsupportedVersion(u8),
    #[error("malformed row at line {0}")]
    MalformedRow(usize),
    #[error("non-monotonic timestamp at line {0}")]
    NonMonotonicTime(usize),
    #[error("internal geometry failure: {0}")]
    InternalGeometry(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
