use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("carrier mismatch: expected k={expected}, found k={found}")]
    CarrierMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    /// A closure or enumeration exceeded its configured budget.
    #[error("capacity exceeded at arity {arity}: reached {reached} entries (cap {cap})")]
    Capacity { arity: usize, reached: usize, cap: usize },

    #[error("set is not closed at arity {0}")]
    NotClosed(usize),

    /// A conditional statement was asked to run on a clone that does not
    /// satisfy its hypothesis.
    #[error("premise not satisfied: {0}")]
    Premise(String),

    #[error("Post-class family is not constant: {first:?} -> {first_class}, {second:?} -> {second_class}")]
    NonConstantPi { first: [u8; 2], first_class: String, second: [u8; 2], second_class: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
