use thiserror::Error;

/// Failures raised by the engine.
///
/// `NotDivisible` and `GramNotUnimodular` almost always point at a sign or
/// precision problem upstream rather than bad user input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("Gram matrix is not unimodular: {0}")]
    GramNotUnimodular(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("nonzero constant term: {0}")]
    NonzeroConstantTerm(String),
    #[error("weight outside lattice: {0}")]
    OutsideLattice(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation bound {bound} is smaller than degree {degree}")]
    TruncationTooSmall { bound: u32, degree: i32 },
    #[error("coefficient is not in the Lazard ring: {0}")]
    NotIntegral(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("pattern is not a decomposition: {0}")]
    NotADecomposition(String),
    #[error("checksum mismatch for {0}")]
    Checksum(String),
    #[error("cache metadata incompatible: {0}")]
    CacheStale(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
