use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An unsupported or inconsistent configuration (grid method, dimension, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A scalar field produced a non-finite value at a quadrature node.
    #[error("non-finite value {value} at node {node:?}")]
    Evaluation { node: Vec<f64>, value: f64 },

    /// The operation is not defined for this body variant.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The operation is defined but too expensive at this dimension.
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),

    /// The Wulff LP has no finite optimum: the direction set does not bound the body.
    #[error("Wulff LP unbounded in direction {direction:?}; refine the direction grid")]
    Unbounded { direction: Vec<f64> },

    /// Q[h_s] lost positive definiteness somewhere along a variation path.
    #[error("path leaves C^2,+ at s = {s}: Q[h_s] not positive definite at node {node:?} (min eigenvalue {min_eigenvalue:e})")]
    PathValidity {
        s: f64,
        node: Vec<f64>,
        min_eigenvalue: f64,
    },

    /// A precondition on the inputs (evenness, zero mean, ...) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("LP solver failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
