use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported radicand {0}; expected 1, 2 or 3")]
    Radicand(u8),
    #[error("cannot combine sqrt{0} and sqrt{1} values")]
    IncompatibleRadicands(u8, u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid Cartan type {family}{rank}")]
    InvalidType { family: char, rank: usize },
    #[error("no diagram automorphism of order {order} for {family}{rank}")]
    InvalidTwist { family: char, rank: usize, order: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index {0} is not a node of the diagram")]
    IndexOutOfRange(usize),
    #[error("not a root: {0:?}")]
    NotARoot(Vec<i32>),
    #[error("{0} is not a minimal length coset representative")]
    NotMinimalCosetRep(String),
    #[error("enumeration budget exceeded: {what} needs more than {budget} elements")]
    BudgetExceeded { what: String, budget: usize },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no construction found: {0}")]
    NotFound(String),
    #[error("falsification: {0}")]
    Falsified(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
