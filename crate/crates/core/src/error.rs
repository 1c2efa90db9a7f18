use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsvError {
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("dimension {0} is not a power of two >= 2")]
    BadDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} qubits requested, supported range is {min}..={max}")]
    QubitRange { n: usize, min: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("amplitude vector has zero norm")]
    ZeroVector,

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("observable has eigenvalue {0} outside {{+1, -1}}")]
    NotInvolution(f64),

    #[error("largest eigenvalue is {0}, a valid protocol needs exactly 1")]
    InvalidProtocol(f64),

    #[error("malformed protocol: {0}")]
    MalformedProtocol(String),

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("stabilizer generators are not independent")]
    DependentGenerators,

    #[error("need {expected} generators for {expected} qubits, got {found}")]
    GeneratorCount { expected: usize, found: usize },

    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),

    #[error("no local homogeneous protocol: setting {setting} has p(1) = 0 but p(psi) = {value:.3e} < 0")]
    NoLocalHomogeneous { setting: String, value: f64 },

    #[error("completeness violated: S = {completeness:.6} > {bound}")]
    CompletenessViolation {
        completeness: f64,
        bound: f64,
        design: Box<crate::design::HomogeneousDesign>,
    },

    #[error("cannot revise: identity weight a = {0:.6} leaves nothing to rescale")]
    CannotRevise(f64),

    #[error("table has negative entries (min {0:.3e})")]
    NegativeEntries(f64),

    #[error("no setting passes the target with certainty")]
    NoProtocol,

    #[error("top eigenvalue is degenerate, no worst-case direction exists")]
    DegenerateTopEigenvalue,

    #[error("table is already complete (S = {0:.6} <= 1)")]
    AlreadyComplete(f64),

    #[error("operator is not homogeneous with gap {0}")]
    NotHomogeneous(f64),

    #[error("malformed adaptive tree: {0}")]
    MalformedTree(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
}

pub type Result<T> = std::result::Result<T, QsvError>;
