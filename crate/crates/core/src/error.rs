use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("surface is not connected")]
    Disconnected,

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("inconsistent cell complex: angle genus {angle_genus} vs euler genus {euler_genus}")]
    GenusMismatch { angle_genus: i64, euler_genus: i64 },

    #[error("invalid slit configuration: {0}")]
    InvalidSlits(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("spin parity undefined: stratum has a zero of odd order")]
    OddZero,

    #[error("invalid construction parameters: {0}")]
    InvalidParameters(String),

    #[error("surface not surgery admissible for k = {0}")]
    NotAdmissible(usize),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("invalid stratum: {0}")]
    InvalidStratum(String),

    #[error("component {component} is not a component of stratum {stratum}")]
    InvalidComponent { component: String, stratum: String },

    #[error("degree {degree} must exceed the largest zero order {max_order}")]
    DegreeTooSmall { degree: usize, max_order: usize },

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("degree {degree} exceeds the census guard {guard}")]
    CensusGuard { degree: usize, guard: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
