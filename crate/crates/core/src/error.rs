use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("point left the chart at t = {time}")]
    ChartExit { time: f64 },
    #[error("vector is not tangent (residual {residual:e})")]
    NotTangent { residual: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("group is not closed under composition (residual {residual:e})")]
    ClosureFailure { residual: f64 },
    #[error("action is not linear on the section: {0}")]
    NonLinearAction(String),
    #[error("point is not principal: isotropy dimension {found}, principal {principal}")]
    NonPrincipal { found: usize, principal: usize },
    #[error("identity check failed: {0}")]
    Violation(String),
    #[error("invariant extension failed; residual {residual}")]
    NotInSpan { residual: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty system")]
    Empty,
}

pub type Result<T> = std::result::Result<T, Error>;
