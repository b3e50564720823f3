use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by graph exploration, layered-graph analysis and the group
/// action machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exploration budget of {cap} vertices exhausted")]
    BudgetExhausted { cap: usize },

    #[error("{to} is not reachable from {from}")]
    Unreachable { from: String, to: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sphere of radius {radius} is empty; the graph is finite")]
    EmptySphere { radius: u64 },

    #[error("ray is not geodesic at position {position}")]
    NotGeodesic { position: usize },

    #[error("ray cannot be extended beyond length {length}")]
    RayNotExtendable { length: usize },

    #[error("ray of length {length} does not reach radius {needed}")]
    RayTooShort { length: usize, needed: u64 },

    #[error("prefix of length {length} is too short to witness constancy")]
    PrefixTooShort { length: usize },

    #[error("Busemann values did not stabilize within depth {depth}")]
    NotStabilized { depth: usize },

    #[error("malformed spec at {location}: {message}")]
    MalformedSpec { location: String, message: String },

    #[error("edge {from:?} -> {to:?} does not join consecutive layers")]
    NonConsecutiveEdge { from: (usize, String), to: (usize, String) },

    #[error("layers {layer} and {} have different sizes ({left} vs {right})", layer + 1)]
    UnequalLayers { layer: usize, left: usize, right: usize },

    #[error("no perfect matching between layers {layer} and {}: {violator:?} has neighbourhood {neighbourhood:?}", layer + 1)]
    NoMatching {
        layer: usize,
        violator: Vec<usize>,
        neighbourhood: Vec<usize>,
    },

    #[error("nothing survives pruning")]
    EmptyGraph,

    #[error("recursion depth {0} exceeded")]
    RecursionDepth(usize),

    #[error("layer of size {0} exceeds the supported maximum of 64")]
    LayerTooLarge(usize),

    #[error("no sphere size occurs {threshold} times up to radius {radius}")]
    NoConstantSubsequence { radius: u64, threshold: usize },

    #[error("generators do not generate the group: {0} not reached")]
    GeneratorsDoNotGenerate(String),

    #[error("word length {length} exceeds the function's domain radius {radius}")]
    DomainTooSmall { length: u64, radius: u64 },

    #[error("horofunction set is not invariant under generator {0}")]
    NotInvariant(String),

    #[error("additivity fails for h = {h}, g = {g}")]
    AdditivityViolation { h: String, g: String },

    #[error("stabilizer sample maps to 0 only")]
    TrivialImage,

    #[error("stabilizer sample is empty")]
    EmptyStabilizer,
}
