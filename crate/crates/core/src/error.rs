use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The utility oracle produced `g(C ∪ {v}) < g(C)`.
    #[error("utility is not monotone: adding element {element} changed g from {before} to {after}")]
    MonotonicityViolation {
        element: usize,
        before: f64,
        after: f64,
    },

    #[error("no strictly positive marginal gain found in {samples} samples")]
    NoPositiveGain { samples: usize },

    /// Greedy reached a non-feasible set where every remaining element has zero gain.
    #[error("greedy stalled at g = {value} < g(X) = {target}: no element has positive gain")]
    StalledProgress { value: f64, target: f64 },

    #[error("element {0} is not covered by any set")]
    UncoverableInstance(usize),

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("vertex set does not induce a connected subgraph")]
    NotConnected,

    /// The bin-tracking bounds need `opt > δ`.
    #[error("reference optimum {opt} must exceed delta {delta}")]
    DegenerateOpt { opt: f64, delta: f64 },

    #[error("instance has {n} elements, above the exact-search cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("no subset satisfies the cover constraint")]
    Infeasible,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
