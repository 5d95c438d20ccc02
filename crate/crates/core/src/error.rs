use thiserror::Error;

/// Errors raised by the toolkit's numeric and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("noise at or above one-half (eta = {0})")]
    NoiseAtOneHalf(f64),

    #[error("no closed form: {0}")]
    NoClosedForm(String),

    #[error("size ordering violated: eavesdropper dataset ({eavesdropper}) larger than authorized dataset ({authorized})")]
    SizeOrdering { authorized: u64, eavesdropper: u64 },

    #[error("inversion failure: {0}")]
    Inversion(String),

    #[error("insufficient check rounds: no check round observed after {rounds} rounds")]
    InsufficientCheckRounds { rounds: u64 },

    #[error("round cap of {cap} rounds exceeded before collecting {target} data rounds")]
    RoundCapExceeded { cap: u64, target: u64 },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("insufficient trials for interval estimate: {got} < {required}")]
    InsufficientTrials { got: usize, required: usize },

    #[error("task too hard: Bayes error {bayes_error:.4} is not below the allowed {allowed:.4}")]
    TaskTooHard { bayes_error: f64, allowed: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
