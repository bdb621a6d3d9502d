use std::io;

use thiserror::Error;

/// Failure while decoding one of the supported file formats.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("invalid vector dimension: {0}")]
    Dim(i64),
    #[error("truncated record at byte offset {offset}")]
    Truncated { offset: u64 },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Format(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("numerics error in epoch {epoch}: {msg}")]
    Numerics { epoch: usize, msg: String },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    /// Prefix the message with `ctx`, keeping the error category.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Config(m) => Error::Config(format!("{ctx}: {m}")),
            Error::Data(m) => Error::Data(format!("{ctx}: {m}")),
            Error::Shape(m) => Error::Shape(format!("{ctx}: {m}")),
            Error::Numerics { epoch, msg } => Error::Numerics {
                epoch,
                msg: format!("{ctx}: {msg}"),
            },
            Error::Parse(e) => Error::Parse(ParseError::Format(format!("{ctx}: {e}"))),
            Error::Io(e) => Error::Io(std::io::Error::new(e.kind(), format!("{ctx}: {e}"))),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Shape(_) => 2,
            Error::Io(_) | Error::Parse(_) | Error::Data(_) => 3,
            Error::Numerics { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
