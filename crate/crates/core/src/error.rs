use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

impl Error {
    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::Parameter(message.into())
    }

    /// True for errors caused by bad user-supplied parameters rather than input data.
    pub fn is_parameter(&self) -> bool {
        matches!(self, Error::Parameter(_))
    }
}
