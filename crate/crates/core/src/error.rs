use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("graph has {actual} vertices, exhaustive search is capped at {cap}")]
    SizeExceeded { actual: usize, cap: usize },
    #[error("edge `{0}` is not collapsible (must be a non-loop edge with index 1)")]
    NotCollapsible(String),
    #[error("index {index} of edge `{edge}` is not divisible by {divisor}")]
    NonDivisibleIndex {
        edge: String,
        index: String,
        divisor: String,
    },
    #[error("slide precondition failed: {0}")]
    SlidePreconditionFailed(String),
    #[error("edge `{0}` needs both indices >= 2 for a standard blow-up")]
    IndexTooSmall(String),
    #[error("blow-up parts do not sum to the indices of `{0}`")]
    PartitionMismatch(String),
    #[error("underlying graph is a tree, no connected cyclic cover exists")]
    TreeInput,
    #[error("universal cover ball exceeds the vertex budget of {0}")]
    BallTooLarge(usize),
    #[error("edge sequence is not a path: {0}")]
    NotAPath(String),
    #[error("graph is not minimal: vertex `{0}` has a single outgoing edge of index 1")]
    NotMinimal(String),
    #[error("integer {0} is too large to factor")]
    FactorizationTooLarge(String),
    #[error("group is elementary (0- or 2-ended)")]
    Elementary,
    #[error("input is unimodular; use the unimodular bridge")]
    UnimodularInput,
    #[error("no usable heavy edge: {0}")]
    NoHeavyEdge(String),
    #[error("degree equalization failed within the search budget")]
    EqualizationFailed,
    #[error("fewer than {wanted} qualifying primes up to {limit}")]
    LimitExhausted { wanted: usize, limit: u64 },
    #[error("bad triangle primes: {0}")]
    BadPrimes(String),
    #[error("obstruction hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("ball degrees outside the admissible set: {0}")]
    BadDegrees(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
