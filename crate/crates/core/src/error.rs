use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad grid geometry, impossible agent counts, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called in a state that does not admit it.
    #[error("usage error: {0}")]
    Usage(String),

    /// Numeric-domain violation (negative inputs, mismatched lengths, empty samples).
    #[error("domain error: {0}")]
    Domain(String),

    /// A serialized artifact could not be parsed.
    #[error("parse error in {path} at line {line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Optimization produced a non-finite loss.
    #[error("non-finite loss: {0}")]
    NonFinite(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
