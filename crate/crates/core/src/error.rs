use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("coset enumeration exceeded {limit} live cosets")]
    Incomplete { limit: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown family `{family}` for group `{group}`")]
    UnknownFamily { group: String, family: String },

    #[error("operation needs a finitely generated presentation with explicit relators")]
    NeedsFinitePresentation,

    #[error("no strategy intersects these subgroups: {0}")]
    UnsupportedOraclePair(String),

    #[error("subgroup has no membership oracle")]
    NoMembership,

    #[error("membership undecided within bounds")]
    OracleUnknown,

    #[error("truncation node {node} is not of finite index (no coset table)")]
    InfiniteNode { node: usize },

    #[error("nodes {0} and {1} are the same subgroup")]
    DuplicateNode(usize, usize),

    #[error("truncation is not closed under conjugation: node {node} by {letter}")]
    NotConjugationClosed { node: usize, letter: String },

    #[error("no node K <= H and H^f, normal in H^f, for H = node {node}")]
    MissingNode { node: usize },

    #[error("vector is not fixed by any node of the truncation")]
    NoFixingNode,

    #[error("module is not an object of the subcategory: {0}")]
    NotInSubcategory(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("completion has more than {ceiling} compatible assignments")]
    TooLarge { ceiling: usize },

    #[error("product violates compatibility at nodes {small} <= {large}")]
    Incompatible { small: usize, large: usize },

    #[error("no m <= {bound} certified")]
    BoundExhausted { bound: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
