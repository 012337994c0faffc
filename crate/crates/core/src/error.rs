use thiserror::Error;

/// Errors raised by the optimizer, its problems and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component {index} = {value} lies outside the unit interval")]
    OutsideUnitCube { index: usize, value: f64 },

    #[error("evaluation budget of {max_evals} exhausted")]
    BudgetExhausted { max_evals: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown {kind} id `{id}` (valid: {valid})")]
    UnknownId {
        kind: &'static str,
        id: String,
        valid: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
