//! Library-wide error type.

use thiserror::Error;

/// Node and colour ids in messages are 1-based / named to match the text
/// formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a game needs more than one node, got {0}")]
    TooFewNodes(usize),
    #[error("node {} out of range 1..={count}", node + 1)]
    NodeOutOfRange { node: usize, count: usize },
    #[error("self-loop on node {}", .0 + 1)]
    SelfLoop(usize),
    #[error("parallel edge {} -> {}", from + 1, to + 1)]
    ParallelEdge { from: usize, to: usize },
    #[error("edge {} -> {} must have positive weight", from + 1, to + 1)]
    ZeroWeight { from: usize, to: usize },
    #[error("colour set must be non-empty")]
    EmptyColourSet,
    #[error("colour set of node {} is empty", .0 + 1)]
    EmptyColourSetAt(usize),
    #[error("colour id {colour} outside palette of size {palette}")]
    ColourOutOfRange { colour: usize, palette: usize },
    #[error("duplicate colour {0} in palette")]
    DuplicateColour(String),
    #[error("node/colour table sizes disagree: expected {expected}, got {got}")]
    InconsistentNodeCount { expected: usize, got: usize },
    #[error("node {} picks colour id {colour} outside its set", node + 1)]
    InvalidChoice { node: usize, colour: usize },
    #[error("coalition must be non-empty")]
    EmptyCoalition,
    #[error("expected a Nash equilibrium")]
    NotNash,
    #[error("graph is not a simple directed cycle")]
    NotACycle,
    #[error("cycle variant is outside the supported families")]
    UnsupportedCycleVariant,
    #[error("not an open chain of cycles: {0}")]
    NotAChain(String),
    #[error("chain games must be unweighted and bonus-free")]
    ChainGameNotPlain,
    #[error("graph has a directed cycle")]
    NotADag,
    #[error("two-colour solver needs a palette of exactly two colours, got {0}")]
    NotTwoColours(usize),
    #[error("the first-unstable-cycle index is undefined on a Nash equilibrium")]
    NbrOnEquilibrium,
    #[error("colour {0} not in palette")]
    UnknownColour(String),
    #[error("strategy space of {size} strategies exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("internal error: {0}")]
    Internal(String),
}
