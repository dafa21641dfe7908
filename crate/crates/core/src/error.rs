use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("matrix is singular")]
    Singular,
    #[error("boundary maps do not compose to zero")]
    NonZeroComposition,
    #[error("chain map square at degree {degree} does not commute")]
    SquareDoesNotCommute { degree: usize },
    #[error("vector is not a cycle at degree {degree}")]
    NotInKernel { degree: usize },
    #[error("X and Z checks do not commute")]
    NonCommutingChecks,
    #[error("Pauli operators act on different numbers of qubits ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid logical basis: {0}")]
    InvalidLogicals(String),
    #[error("{n} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },
    #[error("subcode is not closed under the boundary at degree {degree}")]
    ClosureViolated { degree: usize },
    #[error("map is not surjective at degree {degree}")]
    NotSurjective { degree: usize },
    #[error("map is not injective at degree {degree}")]
    NotInjective { degree: usize },
    #[error("control and target must differ")]
    ControlEqualsTarget,
    #[error("logical index {index} out of range for k = {k}")]
    LogicalIndexOutOfRange { index: usize, k: usize },
    #[error("ancilla distance {ancilla} is smaller than code distance {code}")]
    AncillaDistanceTooSmall { ancilla: usize, code: usize },
    #[error("no valid decomposition: {0}")]
    DecompositionInfeasible(String),
    #[error("supports have empty overlap")]
    EmptyOverlap,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("post-selected outcome has zero probability")]
    ZeroProbabilityOutcome,
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotContained => "NotContained",
            Error::Singular => "Singular",
            Error::NonZeroComposition => "NonZeroComposition",
            Error::SquareDoesNotCommute { .. } => "SquareDoesNotCommute",
            Error::NotInKernel { .. } => "NotInKernel",
            Error::NonCommutingChecks => "NonCommutingChecks",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::InvalidLogicals(_) => "InvalidLogicals",
            Error::TooManyQubits { .. } => "TooManyQubits",
            Error::ClosureViolated { .. } => "ClosureViolated",
            Error::NotSurjective { .. } => "NotSurjective",
            Error::NotInjective { .. } => "NotInjective",
            Error::ControlEqualsTarget => "ControlEqualsTarget",
            Error::LogicalIndexOutOfRange { .. } => "LogicalIndexOutOfRange",
            Error::AncillaDistanceTooSmall { .. } => "AncillaDistanceTooSmall",
            Error::DecompositionInfeasible(_) => "DecompositionInfeasible",
            Error::EmptyOverlap => "EmptyOverlap",
            Error::Unsupported(_) => "Unsupported",
            Error::ZeroProbabilityOutcome => "ZeroProbabilityOutcome",
            Error::UnknownExample(_) => "UnknownExample",
            Error::Parse { .. } => "Parse",
        }
    }
}
