use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index ({i}, {j}, {k}) out of range for dimension {n}")]
    Index { n: usize, i: usize, j: usize, k: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    /// A slice trace `sum_k sigma_{ikk}` exceeded the traceless gate.
    #[error("tensor is not traceless: slice {slice} has trace {trace:e}")]
    Trace { slice: usize, trace: f64 },

    #[error("no convergence after {iterations} iterations (best value {best_value}, residual {residual:e})")]
    Convergence {
        iterations: usize,
        best_value: f64,
        best_point: Vec<f64>,
        residual: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate chart at u = {u:?}: induced metric is singular")]
    DegenerateChart { u: Vec<f64> },

    #[error("immersion is not Legendrian here (residual {residual:e})")]
    LegendrianViolation { residual: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
