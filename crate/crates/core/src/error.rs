use thiserror::Error;

/// Errors raised by construction and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is too small (need q >= 3)")]
    ModulusTooSmall(u64),

    #[error("modulus {0} exceeds 2^31")]
    ModulusTooLarge(u64),

    #[error("field elements belong to different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("empty coefficient list")]
    EmptyPolynomial,

    #[error("parameter {name} = {value} out of range: {reason}")]
    Parameter {
        name: &'static str,
        value: String,
        reason: String,
    },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("codegree of a vertex with itself is undefined (y = {0})")]
    SameVertex(usize),

    #[error("vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("expected a {expected}-set, got {got} vertices")]
    WrongSetSize { expected: usize, got: usize },

    #[error("hypergraph has no coloring (pure H mode)")]
    Uncolored,

    #[error("dense guard exceeded: n = {n} > {limit}; use the sampled walk-count mode")]
    DenseGuard { n: usize, limit: usize },

    #[error("cube identity not verified")]
    IdentityNotVerified,

    #[error("search guard exceeded: {0}")]
    Guard(String),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Precondition(String),

    #[error("container step failed to shrink a set of size {size}")]
    NoShrink { size: usize },

    #[error("no admissible prime: {0}")]
    NoPrime(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, value: impl ToString, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        value: value.to_string(),
        reason: reason.into(),
    }
}
