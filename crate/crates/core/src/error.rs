use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A node index is not below the node count.
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange {
        /// Offending index.
        node: usize,
        /// Node count of the graph.
        node_count: usize,
    },
    /// An edge would connect a node to itself.
    #[error("self-loop at node {0} is not allowed")]
    SelfLoop(usize),
    /// A graph must have at least one node.
    #[error("a graph needs at least one node")]
    EmptyGraph,
    /// `attach_node` was called without targets.
    #[error("attachment target set is empty")]
    EmptyTargets,
    /// Walker length and graph size disagree.
    #[error("walker has {state} amplitudes but the graph has {graph} nodes")]
    DimensionMismatch {
        /// Length of the amplitude vector.
        state: usize,
        /// Node count of the graph.
        graph: usize,
    },
    /// Evolution time is negative or not finite.
    #[error("evolution time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    /// Mean collapse time is not a positive finite number.
    #[error("mean collapse time must be positive and finite, got {0}")]
    InvalidTau(f64),
    /// A walker state lost its normalization.
    #[error("walker norm deviates from 1 by {0:e}")]
    NotNormalized(f64),
    /// The symmetric eigensolver did not converge.
    #[error("symmetric eigensolver failed to converge")]
    NoConvergence,
    /// Growth configuration is invalid.
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    /// A trace event cannot be applied during replay.
    #[error("replay failed at step {step}: {reason}")]
    Replay {
        /// Index of the failing event.
        step: usize,
        /// What went wrong.
        reason: String,
    },
    /// The operation requires a connected graph.
    #[error("graph is not connected")]
    Disconnected,
    /// The operation requires a tree.
    #[error("graph is not a tree")]
    NotATree,
    /// Power-law fit needs at least three nonzero bins.
    #[error("insufficient support for a power-law fit: {0} nonzero bins, need 3")]
    InsufficientSupport(usize),
    /// Graph too large for the requested exact computation.
    #[error("graph has {nodes} nodes, exact computation supports at most {max}")]
    TooLarge {
        /// Node count of the input.
        nodes: usize,
        /// Supported maximum.
        max: usize,
    },
    /// A star chain must be non-empty with positive leaf counts.
    #[error("invalid star chain: {0}")]
    InvalidChain(String),
    /// Generic precondition failure on a numeric argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Shorthand result type.
pub type Result<T> = core::result::Result<T, Error>;
