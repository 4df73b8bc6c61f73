use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// A parameter violated a precondition (value out of range, empty input, ...).
    InvalidParameter(String),
    /// Array shapes or lengths do not line up.
    DimensionMismatch(String),
    /// Numerically degenerate input (zero spectral radius, zero-variance column, ...).
    Degenerate(String),
    /// An iterative solver hit its iteration cap before reaching tolerance.
    NonConvergence(String),
    /// CSV ingestion failed (non-monotone timestamps, empty span, ...).
    Ingest(String),
    /// A bound/theorem check was requested under a schedule it does not cover.
    ScheduleMismatch(String),
    /// Unknown experiment preset name; carries the list of known names.
    UnknownPreset(String),
    Io(std::io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParameter(msg) => write!(f, "invalid parameter: {}", msg),
            Self::DimensionMismatch(msg) => write!(f, "dimension mismatch: {}", msg),
            Self::Degenerate(msg) => write!(f, "degenerate input: {}", msg),
            Self::NonConvergence(msg) => write!(f, "did not converge: {}", msg),
            Self::Ingest(msg) => write!(f, "ingest error: {}", msg),
            Self::ScheduleMismatch(msg) => write!(f, "schedule mismatch: {}", msg),
            Self::UnknownPreset(msg) => write!(f, "unknown preset: {}", msg),
            Self::Io(e) => write!(f, "io error: {}", e),
            Self::Csv(e) => write!(f, "csv error: {}", e),
            Self::Json(e) => write!(f, "json error: {}", e),
            Self::Config(msg) => write!(f, "config error: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Self::Json(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
