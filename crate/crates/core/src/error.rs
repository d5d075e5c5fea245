use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("subgroup is not contained in the ambient group")]
    NotSubgroup,
    #[error("subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("division by zero")]
    DivisionByZero,
    #[error("Galois residue {k} is not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("{what}: order {order} exceeds configured limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        order: u64,
        limit: u64,
    },
    #[error("class functions live on different groups")]
    GroupMismatch,
    #[error("character does not lie over the given character of the normal subgroup")]
    NotIrreducibleOverTheta,
    #[error("character does not lie over the given orbit")]
    NotOver,
    #[error("the pair (g, sigma) does not stabilize theta")]
    NotStabilizing,
    #[error("bad decomposition: {0}")]
    BadDecomposition(String),
    #[error("representation dimension {dim} unsupported: {reason}")]
    DimensionLimit { dim: usize, reason: String },
    #[error(
        "factor set normalization failed ({0}); this indicates an implementation bug, \
         root-of-unity factor sets always exist for character triples"
    )]
    NormalizationFailed(String),
    #[error("character transfer is ambiguous: {0}")]
    AmbiguousTransfer(String),
    #[error("map is not a group isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("conjugation image mismatch: {0}")]
    ImageMismatch(String),
    #[error("character is not irreducible")]
    NotIrreducible,
    #[error("not an H-triple: {0}")]
    NotHTriple(String),
    #[error("order relation check failed: {0}")]
    Check(String),
    #[error("character table computation failed: {0}")]
    TableFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, order: u64, limit: u64) -> Self {
        Error::SizeLimitExceeded { what, order, limit }
    }
}
