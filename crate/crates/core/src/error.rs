use thiserror::Error;

use crate::linalg::Matrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("subspace is not contained in the enclosing subspace")]
    NotASubset,
    #[error("Gram matrix is not positive definite")]
    IndefiniteGram,
    #[error("Gram matrix is not symmetric")]
    AsymmetricGram,
    #[error("{0} requires the rational field")]
    PrimeFieldUnsupported(&'static str),
    #[error("matrix is singular")]
    Singular,

    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("object `{0}` declared twice")]
    DuplicateObject(String),
    #[error("edge {0} -> {1} declared twice")]
    DuplicateEdge(String, String),
    #[error("edge {0} -> {1} is a loop")]
    SelfLoop(String, String),
    #[error("cycle through `{0}`")]
    Cycle(String),
    #[error("edge {0} -> {1} is implied by a longer path (not a transitive reduction)")]
    RedundantEdge(String, String),
    #[error("category is not connected")]
    Disconnected,
    #[error("category has no objects")]
    Empty,
    #[error("objects {0} and {1} are not comparable")]
    Incomparable(String, String),
    #[error("subcategory {0:?} is not admissible")]
    InadmissibleSubcategory(Vec<String>),

    #[error("composites {from} -> {to} disagree along two paths (first differing entry at row {row}, column {col})")]
    PathConflict {
        from: String,
        to: String,
        row: usize,
        col: usize,
    },
    #[error("modules are indexed by different categories or fields")]
    CategoryMismatch,

    #[error("multi-flag closure exceeded {cap} members")]
    FlagCapExceeded { cap: usize },
    #[error("local structure did not stabilize")]
    NotStabilized,
    #[error("graded piece is zero")]
    ZeroPiece,
    #[error("internal contract violation on support {0}")]
    InconsistentDims(String),
    #[error("no verified inner-product structure: {0}")]
    NoVerifiedIpc(String),
    #[error("loop leaves the block support")]
    LoopExitsSupport,
    #[error("loop {loop_index} carries nontrivial holonomy")]
    HolonomyPresent { loop_index: usize, operator: Matrix },
    #[error("category is not a chain")]
    NotAChain,
    #[error("category is not a product of chains")]
    NotProductOfChains,

    #[error("vertex map on {0} -> {1} does not send simplices to simplices")]
    NotSimplicial(String, String),
    #[error("vertex map on {0} -> {1} is not injective")]
    NonInjectiveMap(String, String),
    #[error("vertex maps disagree along two paths {0} -> {1}")]
    DiagramConflict(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
