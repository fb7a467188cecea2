use thiserror::Error;

/// Errors raised across network construction, solving and circuit conversion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network is disconnected: {components} components")]
    Disconnected { components: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular (pivot {pivot} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("linear program is infeasible: {0}")]
    Infeasible(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("no congested line: prices are uniform and the circuit analogy has no source")]
    NoCongestion,

    #[error("no marginal injector: every injector sits at a limit, ground cannot be placed")]
    NoMarginalInjector,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// `Parse` error with the position up front: `line L column C: message`.
pub(crate) fn json_error(e: serde_json::Error) -> Error {
    let mut msg = e.to_string();
    if let Some(at) = msg.rfind(" at line ") {
        msg.truncate(at);
    }
    Error::Parse(format!("line {} column {}: {msg}", e.line(), e.column()))
}
