use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("{0}")]
    Format(String),

    #[error("degree of vertex {vertex} is {degree}")]
    Degree { vertex: usize, degree: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex count {0} is odd")]
    OddVertexCount(usize),

    #[error("edge count {edges} does not equal 3N/2 = {expected}")]
    EdgeCount { edges: usize, expected: usize },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("unknown graph family '{0}'")]
    UnknownFamily(String),

    #[error("no simple pairing found after {0} attempts")]
    RejectionBudget(usize),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("alpha mismatch: file has {found}, recomputed {expected}")]
    AlphaMismatch { found: String, expected: String },

    #[error("mapping violates ordering rule at edge {edge}")]
    MappingOrder { edge: usize },

    #[error("not a partition: {0}")]
    NotPartition(String),

    #[error("not a vertex cover")]
    NotCover,

    #[error("vertex {0} cannot be removed from V_E while keeping a cover")]
    NotRemovable(usize),

    #[error("allocation has zero Nash social welfare")]
    NotPositive,

    #[error("allocation is not c-approximate")]
    NotApproximate,

    #[error("check falsified: {0}")]
    Falsified(String),

    #[error("exponent 2^{two_exp} exceeds the comparison bound 2^{bound}")]
    CompareBound { two_exp: u32, bound: u32 },

    #[error("instance too large for {what}: {size} > {limit}")]
    Budget {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}
