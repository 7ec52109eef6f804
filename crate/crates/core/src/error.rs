//! Error types shared across the library.

use thiserror::Error;

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero during evaluation")]
    DivisionByZero,
    #[error("coordinate x{index} referenced but the point has dimension {dim}")]
    CoordOutOfRange { index: usize, dim: usize },
    #[error("derivative axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
}

/// Top-level error for geometric computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("point has dimension {got}, chart has dimension {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("empty point list")]
    EmptyPointList,
    #[error("metric is singular at the sample point")]
    SingularMetric,
    #[error("frame matrix is singular")]
    SingularFrame,
    #[error("frame construction broke down at step {step}: {detail}")]
    FrameBreakdown { step: usize, detail: String },
    #[error("operation requires {requirement}")]
    UnsupportedCase { requirement: String },
    #[error("matrix has size {got}, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("adapted-connection solve violated its uniqueness contract: {detail}")]
    TheoremViolation { detail: String },
    #[error("unknown example name '{0}'")]
    UnknownExample(String),
    #[error("manifold data is invalid: {0}")]
    InvalidManifold(String),
}
