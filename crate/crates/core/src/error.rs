use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown or unsupported Coxeter type `{0}`")]
    UnknownType(String),
    #[error("group budget exceeded: {0}")]
    GroupBudget(String),
    #[error("section budget exceeded: {0}")]
    SectionBudget(String),
    #[error("element is not in the local ring (negative valuation)")]
    NotInLocalRing,
    #[error("unequal parameters are not supported by {0}")]
    UnequalParameters(&'static str),
    #[error("q^c + 1 is not invertible for generator s{0}")]
    NotInvertible(usize),
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
