//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the arithmetic, simulation, and ingestion layers.
#[derive(Debug, Error)]
pub enum ScError {
    #[error("value {value} out of range for {what}")]
    ValueOutOfRange { what: &'static str, value: f64 },

    #[error("stream length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("stream format mismatch: expected {expected}, got {got}")]
    FormatMismatch { expected: &'static str, got: &'static str },

    #[error("invalid stream length {0}: must be a power of two not larger than 65536")]
    InvalidStreamLength(usize),

    #[error("LFSR state must be non-zero")]
    ZeroLfsrState,

    #[error("unsupported LFSR width {0}: supported widths are 2..=16")]
    UnsupportedLfsrWidth(u32),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("division by zero denominator stream")]
    ZeroDenominator,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, ScError>;

impl ScError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        ScError::Io {
            path: path.into(),
            source,
        }
    }
}
