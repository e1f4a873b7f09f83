use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    InvalidPrime(u32),
    #[error("mixed primes {0} and {1} in one combination")]
    MixedPrimes(u32, u32),
    #[error("rewriting exceeded the iteration bound of {0} steps")]
    IterationGuard(usize),
    #[error("relation not applicable: {0}")]
    RelationNotApplicable(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("restriction undefined on a class of degree {0}")]
    RestrictionUndefined(i64),
    #[error("unsupported relation: {0}")]
    UnsupportedRelation(String),
    #[error("not an element of the free restricted Lie algebra: {0}")]
    NotLieElement(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("resource limit: {0}")]
    Resource(String),
}
