use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad build or query parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Bad caller-supplied data (empty trajectories, mixed forms, k = 0, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A malformed line in a trajectory text file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A persisted index or trie payload failed to decode.
    #[error("format error in {section} at byte {offset}: {msg}")]
    Format {
        section: &'static str,
        offset: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn format(section: &'static str, offset: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            section,
            offset,
            msg: msg.into(),
        }
    }
}
