use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("point {0} is not finite")]
    NonFinitePoint(f64),
    #[error("point {0} lies outside the carrier")]
    OutsideCarrier(f64),
    #[error("malformed distance matrix: {0}")]
    MalformedMatrix(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid comparison function: {0}")]
    InvalidComparison(String),
    #[error("comparison functions are defined on [0, inf), got {0}")]
    NegativeArgument(f64),
    #[error("invalid contraction condition: {0}")]
    InvalidCondition(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not a fixed point of the map")]
    NotFixed(f64),
    #[error("{theorem} requires a {required} condition, the instance carries {found}")]
    ConditionMismatch {
        theorem: String,
        required: String,
        found: String,
    },
    #[error("conclusion of {0} cannot be validated: hypotheses do not pass")]
    HypothesesFail(String),
}
