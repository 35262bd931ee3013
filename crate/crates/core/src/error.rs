use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    #[error("invalid scene: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidScene(Vec<crate::scenario::Violation>),

    #[error("scenario generation failed: {0}")]
    Generation(String),

    #[error("rollout has no vehicles")]
    EmptyRollout,

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("malformed trajectory: {0}")]
    Trajectory(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
