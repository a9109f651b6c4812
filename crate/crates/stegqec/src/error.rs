use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A textual Pauli, circuit, or table could not be parsed.
    #[error("parse error at index {index}: {message}")]
    Parse { index: usize, message: String },

    /// Operands have incompatible sizes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument fell outside the documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A name passed to a lookup was not recognized.
    #[error("unknown name `{name}`; valid names: {valid}")]
    UnknownName { name: String, valid: String },

    /// A state or matrix exceeded the hard qubit caps of the dense simulator.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Encoder synthesis got stuck on a column of the binary matrix.
    #[error("synthesis error: stuck at column {column}: {message}")]
    Synthesis { column: usize, message: String },

    /// A checked-in table fixture failed its load-time verification.
    #[error("fixture load error at row {row}: {message}")]
    Load { row: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
