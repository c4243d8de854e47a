use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root context: {0}")]
    Context(String),
    #[error("unknown bundle `{0}`")]
    UnknownBundle(String),
    #[error("the context has no projectivized bundle")]
    NoHyperplane,
    #[error("classes come from different root contexts")]
    ContextMismatch,
    #[error("class is not symmetric in the roots of `{0}`")]
    NotSymmetric(String),
    #[error("virtual bundle has negative rank {0}")]
    NegativeRank(i64),
    #[error("pushforward input still depends on the hyperplane class after reduction")]
    NotReduced,
    #[error("parameters outside the hypothesis: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
