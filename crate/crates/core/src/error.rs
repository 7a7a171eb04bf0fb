use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis label `{label}` has length {got}, expected {expected}")]
    LabelLength {
        label: String,
        got: usize,
        expected: usize,
    },

    #[error("basis label `{0}` contains characters other than 0 and 1")]
    LabelCharacters(String),

    #[error("qubit count {0} outside supported range 1..={max}", max = crate::statevector::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("gate qubits must be distinct, got {0:?}")]
    QubitCollision(Vec<usize>),

    #[error("state expects {expected} qubits, got {got}")]
    QubitCountMismatch { expected: usize, got: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("amplitude array length {0} is not a power of two")]
    AmplitudeLength(usize),

    #[error("angle `{name}` = {value} outside [{lo}, {hi}]")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("bias ε = {0} outside (-1/10, 1/10)")]
    BiasOutOfRange(f64),

    #[error("game sequence is empty")]
    EmptySequence,

    #[error("invalid game token `{0}` (expected `A` or `B`)")]
    InvalidToken(char),

    #[error("mixing weight {0} outside [0, 1]")]
    InvalidMixWeight(f64),

    #[error("no sign change of the payoff on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("history chain is reducible or singular")]
    ReducibleChain,

    #[error("{0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by numerically invalid input (as opposed to malformed syntax).
    pub fn is_numeric(&self) -> bool {
        !matches!(
            self,
            Error::Parse(_) | Error::Io(_) | Error::InvalidToken(_) | Error::EmptySequence | Error::LabelCharacters(_)
        )
    }
}
