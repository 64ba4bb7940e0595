use thiserror::Error;

/// Errors produced by the numerical routines and file formats in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error in layer {layer}: {message}")]
    LayerParse { layer: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid state in cell {cell} at t = {time}: {message}")]
    StateInvalid {
        cell: usize,
        time: f64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
