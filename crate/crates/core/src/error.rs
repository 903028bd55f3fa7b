use thiserror::Error;

/// Errors raised across the simulator, gadget library and compiler.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied something outside an operation's contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Circuit text could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The circuit cannot be lowered to a measurement program.
    #[error("compile error: {0}")]
    Compile(String),

    /// A measurement program is malformed or could not be executed.
    #[error("program error: {0}")]
    Program(String),

    /// Conjugation left the Pauli group.
    #[error("conjugation of {pauli} by {gate} is not a Pauli word")]
    NotPauli { pauli: String, gate: String },

    /// A Pauli random walk ran out of steps before reaching its target.
    #[error("random walk exhausted after {steps} steps (probability of this is {probability:e})")]
    WalkExhausted { steps: usize, probability: f64 },

    /// A condition the construction guarantees did not hold.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
