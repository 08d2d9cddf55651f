use thiserror::Error;

use crate::statevec::QubitLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(QubitLabel),
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("label {0} is present in both states")]
    OverlappingLabels(QubitLabel),
    #[error("qubit {0} is not part of the state")]
    UnknownLabel(QubitLabel),
    #[error("qubit {0} was named twice in one gate")]
    SameLabel(QubitLabel),
    #[error("register of {0} qubits exceeds the {max} qubit limit", max = crate::statevec::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("matrix of dimension {dim} cannot act on {targets} qubits")]
    DimensionMismatch { dim: usize, targets: usize },
    #[error("matrix is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),
    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),
    #[error("qubit {label} is entangled with the rest of the state (residual {residual:e})")]
    NotSeparable { label: QubitLabel, residual: f64 },
    #[error("data qubit {0} is still live at the end of the round")]
    LeftoverDataQubit(QubitLabel),
    #[error("label sets differ")]
    LabelSetMismatch,
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("operation requires round {expected}, got round {got}")]
    WrongRound { expected: String, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// Tripwires that indicate a simulator or attack-sequencing bug rather
    /// than bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(
            self,
            Error::NotSeparable { .. } | Error::InvariantBreach(_) | Error::NotNormalized(_)
        )
    }
}
