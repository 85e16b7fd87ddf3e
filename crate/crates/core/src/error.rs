use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group of {entries} table entries exceeds the cap of {cap}")]
    GroupTooLarge { entries: u128, cap: u128 },

    #[error("malformed Cayley document: {0}")]
    Malformed(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("operands live in different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("two-point variable needs distinct points, got {0} twice")]
    DegeneratePair(usize),

    #[error("element index {index} out of range for group of size {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("mass {mass} at element {element} exceeds 1/2; an element of order 2 gives a law no pair mixture of this kind can bound")]
    MassAboveHalf { element: usize, mass: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no eligible elements: {0}")]
    NoEligible(String),

    #[error("search space of {count} laws exceeds the cap of {cap}; reduce n")]
    SearchTooLarge { count: u128, cap: u128 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("recomputation disagrees: {0}")]
    Inconsistent(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
