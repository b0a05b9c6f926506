use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("link {id} is not admissible: {reason}")]
    Inadmissible { id: usize, reason: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unknown link id {0}")]
    UnknownLink(usize),

    #[error("power mode mismatch: expected {expected}, found {found}")]
    ModeMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("no separation constant exists: sigma^-1 - xi/signal = {slack} <= 0")]
    NoSeparation { slack: f64 },

    #[error("oracle refused: {0}")]
    OracleCap(String),

    #[error("schedule failed verification: {0}")]
    Verification(String),

    #[error("linear program: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("schedule was made for instance {expected}, not {found}")]
    DigestMismatch { expected: String, found: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}
