use thiserror::Error;

/// Errors raised by the two-particle toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    Range(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Input that carries no usable state, e.g. a zero vector or a Pauli-excluded pair.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// The selected outcome has zero weight on the prepared state.
    #[error("measurement outcome impossible: {0}")]
    ImpossibleOutcome(String),
}

pub type Result<T> = std::result::Result<T, Error>;
