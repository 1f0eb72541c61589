use thiserror::Error;

use crate::setmodel::Window;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid window [{lo},{hi}]")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("{n} lies outside window {window}")]
    OutsideWindow { n: i64, window: Window },

    #[error("empty set")]
    EmptySet,

    #[error("empty list")]
    EmptyList,

    #[error("spec has no exact periodic form: {0}")]
    NotPeriodicClass(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
