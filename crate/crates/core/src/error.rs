use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid omega word: {0}")]
    InvalidOmega(String),

    #[error("invalid generator word: {0}")]
    InvalidWord(String),

    #[error("omega is almost constant; the relator scheme is undefined")]
    AlmostConstant,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("graph is not a path with loops: {0}")]
    NotAPath(String),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("graph is not regular of degree {expected}: vertex {vertex} has degree {found}")]
    NotRegular {
        expected: usize,
        vertex: usize,
        found: usize,
    },

    #[error("radius {radius} is below twice the norm estimate {norm_estimate}")]
    RadiusTooSmall { radius: f64, norm_estimate: f64 },

    #[error("operator is not self-adjoint")]
    NotSelfAdjoint,

    #[error("verification window too small: {0}")]
    WindowTooSmall(String),

    #[error("start vertex {0} is not in the fiber of the path origin")]
    BadStart(usize),

    #[error("not an eigenpair: |H f - λ f| = {0:e}")]
    NotAnEigenpair(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }
}
