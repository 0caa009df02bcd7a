use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element {element} does not belong to {group}")]
    MismatchedGroup { element: String, group: String },
    #[error("degenerate tuple: adjacent entries {0} coincide")]
    DegenerateTuple(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: String, found: usize },
    #[error("point {0} is outside the domain of a table-backed map")]
    OutsideDomain(String),
    #[error("cochain table does not cover {0}")]
    DomainUnderflow(String),
    #[error("invalid combing: {0}")]
    InvalidCombing(String),
    #[error("invalid metric space: {0}")]
    InvalidMetric(String),
    #[error("matrix shapes do not compose: {0}")]
    NonComposable(String),
    #[error("differentials do not square to zero at degree {0}")]
    BrokenComplex(usize),
    #[error("resource cap exceeded: {needed} entries requested, cap is {cap}")]
    ResourceCap { needed: u128, cap: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
