use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: requested {requested} plane bits but the content only holds {capacity}")]
    Capacity { requested: usize, capacity: usize },

    /// Length, index or bounds violation on otherwise well-formed values.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at byte offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("content does not belong to the support family")]
    NotInFamily,

    #[error("bases {first} and {second} are identical outside the plane")]
    Collision { first: usize, second: usize },

    #[error("invalid hex: {0}")]
    Hex(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(offset: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            reason: reason.into(),
        }
    }
}
