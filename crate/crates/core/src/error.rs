use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bit strings must be nonempty")]
    EmptyString,
    #[error("invalid symbol {0:?} in bit string")]
    InvalidSymbol(char),
    #[error("cannot parse composition {0:?}")]
    InvalidComposition(String),
    #[error("string {0} occurs more than once")]
    DuplicateString(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("Dyck test needs an even length, got {0}")]
    OddLength(usize),
    #[error("minimum distance {d} is below {need}, required for h = {h}")]
    DistanceTooSmall { d: usize, h: usize, need: usize },
    #[error("search needs {needed} steps, budget is {budget}")]
    SearchSpaceTooLarge { needed: u128, budget: u128 },
    #[error("no subset of the codebook matches the target")]
    NoSolution,
    #[error("{0} subsets match the target")]
    AmbiguousSolution(usize),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("fragments of length {length} split into {prefixes} prefixes and {suffixes} suffixes, expected {expected} each")]
    CountMismatch { length: usize, prefixes: usize, suffixes: usize, expected: usize },
    #[error("sum symbol {value} at position {position} is outside 0..={max}")]
    NegativeIncrement { position: usize, value: i64, max: usize },
    #[error("pool of {size} compositions is not a multiple of 2N = {}", 2 * codeword_len)]
    InconsistentPoolSize { size: usize, codeword_len: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pattern not present in pool: {0}")]
    PatternNotPresent(String),
    #[error("replacing {from} ones by {to} ones does not reduce mass")]
    NotMassReducing { from: usize, to: usize },
    #[error("sides disagree at position {position}: {prefix} vs {suffix}")]
    Conflict { position: usize, prefix: u32, suffix: u32 },
    #[error("code corrects {available} erasures, {needed} required")]
    CapabilityTooSmall { needed: usize, available: usize },
    #[error("{erasures} erasures exceed the capability {capability}")]
    TooManyErasures { erasures: usize, capability: usize },
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("h must be even, got {0}")]
    OddH(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
