use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// One or more configuration invariants are violated.
    #[error("configuration invalid: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    /// An infinite series hit its term cap before meeting the tolerance.
    #[error("series did not converge after {terms} terms (partial value {partial})")]
    NotConverged { partial: f64, terms: usize },

    #[error("diversity slope undefined: {0}")]
    UndefinedSlope(String),

    /// Both arguments of a high-SNR rate expression diverge.
    #[error("high-SNR rate is undefined: {0}")]
    DegenerateRate(&'static str),

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
