use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("expected {expected} table digits, found {found}")]
    DigitCount { expected: usize, found: usize },

    #[error("invalid digit {found:?} at table offset {offset}")]
    InvalidDigit { offset: usize, found: char },

    #[error("Latin property violated in argument {position} at table index {index}")]
    NotLatin { position: usize, index: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity {arity} exceeds the supported maximum {max}")]
    ArityTooLarge { arity: usize, max: usize },

    #[error("arity {arity} exceeds the search cap {cap}")]
    CapExceeded { arity: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a permutation of {{0,1,2,3}}: {0}")]
    InvalidPerm(String),

    #[error("tuple is not a codeword of the quasigroup")]
    NotInCode,

    #[error("value permutation does not map f(anchor) to the target value")]
    InconsistentValue,

    #[error("autotopy group elements are not materialized")]
    NotMaterialized,

    #[error("quasigroup is not uniformly {{0,{0}}}-semilinear")]
    NotUniformlySemilinear(u8),

    #[error("quasigroup is not semilinear")]
    NotSemilinear,

    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("decomposition is not proper: {0}")]
    NotProper(String),

    #[error("decomposition is not reduced: {0}")]
    NotReduced(String),

    #[error("invalid decomposition tree: {0}")]
    InvalidTree(String),

    #[error("unknown quasigroup name {0:?}")]
    UnknownName(String),

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("serialization error: {0}")]
    Serde(String),
}
