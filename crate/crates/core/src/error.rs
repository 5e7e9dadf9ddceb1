use thiserror::Error;

pub type Result<T> = std::result::Result<T, SzneError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SzneError {
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("slot collision: slot {0} declared more than once")]
    SlotCollision(usize),
    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid fold factor {0}")]
    InvalidFoldFactor(u32),
    #[error("chain too short: need at least 2 qubits, got {0}")]
    ChainTooShort(usize),

    #[error("{qubits} qubits exceeds the dense limit of {limit}; use light-cone or analytic backend")]
    DenseLimitExceeded { qubits: usize, limit: usize },
    #[error("analytic path requires traceless observable")]
    NonTracelessObservable,
    #[error("light cone too wide: {width} qubits exceeds limit {limit}")]
    LightConeTooWide { width: usize, limit: usize },
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("inconsistent relaxation times: T1 = {t1}, T2 = {t2}")]
    InconsistentRelaxation { t1: f64, t2: f64 },
    #[error("invalid Pauli channel: probabilities sum to {0}")]
    InvalidPauliChannel(f64),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid shot count {0}")]
    InvalidShotCount(u64),
    #[error("shadow collection requires dense backend ({qubits} qubits, limit {limit})")]
    ShadowNeedsDense { qubits: usize, limit: usize },

    #[error("truncation {truncation} exceeds dimension {dimension}")]
    TruncationExceedsDimension { truncation: usize, dimension: usize },
    #[error("unknown feature {0}")]
    UnknownFeature(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("regularization required: normal equations are singular")]
    RegularizationRequired,
    #[error("oracle limited to small d (got d = {0}, max 6)")]
    OracleLimited(usize),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("degenerate design matrix: repeated or non-positive levels")]
    DegenerateDesign,
    #[error("insufficient points: {kind} extrapolation needs at least {needed} levels, got {got}")]
    InsufficientPoints { kind: &'static str, needed: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("missing surrogate for level {0}")]
    MissingSurrogate(u32),
    #[error("empty validation set")]
    EmptyValidationSet,
    #[error("unknown level {0}")]
    UnknownLevel(u32),
    #[error("empty budget")]
    EmptyBudget,

    #[error("unknown model: {0}")]
    UnknownModel(String),
    #[error("exact solver unavailable: {0}")]
    ExactSolverUnavailable(String),
    #[error("estimator inconsistency: energy {energy} below -B = {bound}")]
    EstimatorInconsistency { energy: f64, bound: f64 },
    #[error("cannot compute residuals: run has no ideal reference")]
    NoIdealReference,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
