use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid presentation: {0}")]
    Invalid(String),

    #[error("malformed Gauss code: {0}")]
    Gauss(String),

    #[error("tree {index} has degree {degree}; expand first")]
    NotArrow { index: usize, degree: usize },

    #[error("tree {0} is a w-arrow and cannot be expanded")]
    AlreadyArrow(usize),

    #[error("tree index {0} out of range")]
    TreeIndex(usize),

    #[error("tail index {tail} out of range for tree {tree}")]
    TailIndex { tree: usize, tail: usize },

    #[error("move not applicable: {0}")]
    NotApplicable(String),

    #[error("move {index} aborted the trace: {reason}")]
    TraceAborted { index: usize, reason: String },

    #[error("not a long-knot presentation: {0}")]
    NotLongKnot(String),

    #[error("not a string-link presentation: {0}")]
    NotStringLink(String),

    #[error("invalid index sequence: {0}")]
    Sequence(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("computation limit exceeded: {0}")]
    Limit(String),
}
