use thiserror::Error;

use crate::graph::{Identifier, NodeId};
use crate::rules::RuleKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // graph construction
    #[error("identifier must be positive, got {0}")]
    InvalidIdentifier(u64),
    #[error("duplicate identifier {0}")]
    DuplicateIdentifier(Identifier),
    #[error("edge endpoint {0} does not exist")]
    EdgeEndpointMissing(String),
    #[error("self loop on node {0}")]
    SelfLoop(Identifier),
    #[error("invalid matching: {0}")]
    MatchingNotValid(String),
    #[error("matching is not maximal: edge ({0}, {1}) has two unmatched endpoints")]
    MatchingNotMaximal(Identifier, Identifier),
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    #[error("unknown identifier {0}")]
    UnknownIdentifier(u64),

    // rules / engine
    #[error("node {0} is not a matched node")]
    NotMatchedNode(Identifier),
    #[error("nodes {0} and {1} are not matched partners")]
    NotPartners(Identifier, Identifier),
    #[error("rule {rule} is not enabled at node {node}")]
    RuleNotEnabled { node: Identifier, rule: RuleKind },
    #[error("a step must contain at least one move")]
    EmptyStep,
    #[error("node {0} appears twice in one step")]
    DuplicateNode(Identifier),
    #[error("max_moves must be positive")]
    InvalidMaxMoves,
    #[error("configuration covers {found} nodes, graph has {expected}")]
    ConfigurationMismatch { expected: usize, found: usize },

    // gadget graph
    #[error("N must be at least 1, got {0}")]
    InvalidN(usize),
    #[error("({0}, {1}) is not an edge of the underlying matching")]
    NotMatchedEdge(Identifier, Identifier),
    #[error("matched node {0} does not have exactly one distinct single neighbor")]
    AmbiguousSingleNeighbor(Identifier),
    #[error("bit index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    // adversary
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("counter is already at its maximum value {0}")]
    AtMaximum(u64),
    #[error("verification failed at omega = {0}")]
    VerificationFailed(u64),

    // oracle
    #[error("graph has {0} edges, exhaustive oracle is limited to {1}")]
    TooLarge(usize, usize),
    #[error("edge set is not a matching: {0}")]
    NotAMatching(String),
    #[error("configuration is not stable")]
    NotStable,

    // io
    #[error("parse error: {0}")]
    Parse(String),
    #[error("replay assertion failed at step {step}: {detail}")]
    AssertionFailed { step: String, detail: String },
}
