use thiserror::Error;

/// Errors raised by the model constructors and operations.
///
/// Verification outcomes (counterexamples, exhausted resolution) are never
/// errors; they are carried in reports. Errors are reserved for malformed
/// inputs and violated preconditions that make an operation meaningless.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("carrier size must be at least 1")]
    EmptyCarrier,

    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: usize, right: usize },

    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("relation is not reflexive")]
    NotReflexive,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("not a pseudometric: {0}")]
    NotAPseudometric(String),

    #[error("scale sequence violates the halving law at position {0}")]
    ScaleRatio(usize),

    #[error("invalid bornology: {0}")]
    InvalidBornology(String),

    #[error("space is not uniformly locally bounded at this resolution")]
    Uncertified,

    #[error("map is not a bijection: {0}")]
    NotBijective(String),

    #[error("map {0} is not a member of the map set")]
    NotInMapSet(usize),

    #[error("map set has no identity map")]
    NoIdentity,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("subset is not symmetric or misses the identity: {0}")]
    BadNeighborhood(String),

    #[error("inner automorphism of element {0} missing from the automorphism list")]
    MissingInner(usize),

    #[error("exhaustion law violated at step {0}")]
    BadExhaustion(usize),

    #[error("invalid piecewise-linear map: {0}")]
    InvalidPl(String),

    #[error("invalid affine permutation: {0}")]
    InvalidAffinePerm(String),

    #[error("window {window} exceeds bound {bound}")]
    WindowTooLarge { window: i64, bound: i64 },

    #[error("invalid measure data: {0}")]
    InvalidMeasure(String),

    #[error("rays do not cover the line: a = {a} > b = {b}")]
    RaysDoNotCover { a: String, b: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("suite `{suite}` needs section `{section}`")]
    MissingSection { suite: String, section: String },
}

pub type Result<T> = std::result::Result<T, Error>;
