use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("line {line}: duplicate timestamp")]
    DuplicateTimestamp { line: u64 },
    #[error("file contains no data rows")]
    EmptyFile,
    #[error("unsupported image format (expected P2, P3, P5 or P6)")]
    UnsupportedFormat,
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("pixel data truncated")]
    TruncatedPixelData,
    #[error("invalid plot: {0}")]
    InvalidPlot(&'static str),
    #[error(transparent)]
    Numeric(#[from] fastimd::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;
