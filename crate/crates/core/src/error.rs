use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not a member of the group")]
    NotInGroup,
    #[error("vector has a non-integer coordinate")]
    NotInteger,
    #[error("not separable: point lies in the closure's positive set")]
    NotSeparable,
    #[error("stack does not define a linear order on the rational vectors")]
    NotLinear,
    #[error("stack is not archimedean")]
    NotArchimedean,
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid stack: {0}")]
    InvalidStack(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown object name `{0}`")]
    UnknownName(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
