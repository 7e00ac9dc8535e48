use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid index at {path}: {index} (limit {limit})")]
    InvalidIndex {
        path: String,
        index: usize,
        limit: usize,
    },
    #[error("element {0} is not covered by any scheduled set")]
    UncoveredElement(usize),
    #[error("instance is not coverable: elements {0:?} belong to no set")]
    Uncoverable(Vec<usize>),
    #[error("instance failed validation: {0}")]
    Validation(String),
    #[error("assignment is empty, density is undefined")]
    EmptyAssignment,
    #[error("set {set} has infinite cost on machine {machine}")]
    InfiniteCost { set: usize, machine: usize },
    #[error("set {0} appears more than once")]
    DuplicateSet(usize),
    #[error("no set covers any remaining element")]
    NoCoverage,
    #[error("operation requires a {expected} cost model")]
    WrongCostModel { expected: &'static str },
    #[error("instance has no precedence graph")]
    MissingDag,
    #[error("precedence graph has a cycle through set {0}")]
    CyclicDag(usize),
    #[error("family is not precedence-closed: set {set} is missing predecessor {missing}")]
    NotClosed { set: usize, missing: usize },
    #[error("no rounding iteration satisfied the budgets after {iterations} iterations")]
    NoIterationKept { iterations: u64 },
    #[error("LP solver failed: {0}")]
    NumericalFailure(String),
    #[error("LP is {0}")]
    LpStatus(&'static str),
    #[error("oracle limits exceeded: {0}")]
    LimitsExceeded(String),
    #[error("PDS oracle made no progress with {remaining} elements remaining")]
    StalledOracle { remaining: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}
