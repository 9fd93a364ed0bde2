use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("causal order has a cycle: {}", .cycle.join(" < "))]
    Cycle { cycle: Vec<String> },

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("causet has {0} elements; at most {max} are supported", max = crate::causet::MAX_ELEMENTS)]
    TooManyElements(usize),

    #[error("region references elements outside a causet of {elements} elements")]
    ForeignRegion { elements: usize },

    #[error("regions are not space-like separated")]
    NotSpacelike,

    #[error("regions of a composition are not pairwise disjoint")]
    NotDisjoint,

    #[error("event is not a full specification of its region: {0}")]
    NotFullSpec(String),

    #[error("intersection of full specifications is empty")]
    EmptyIntersection,

    #[error("conditioning event has probability zero")]
    ZeroCondition,

    #[error("not a partition of the history space: {0}")]
    NotAPartition(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("history space too large: alphabet {alphabet} over {elements} elements exceeds {max} histories", max = crate::histories::MAX_HISTORIES)]
    SpaceTooLarge { alphabet: usize, elements: usize },

    #[error("invalid alphabet size {0}; must be between 2 and 36")]
    InvalidAlphabet(usize),

    #[error("event references histories outside the space")]
    ForeignEvent,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("dom axioms violated: {0}")]
    AxiomViolation(String),

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("{0}")]
    Format(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
