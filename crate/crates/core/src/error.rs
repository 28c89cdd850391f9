use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug)]
pub enum Error {
    /// A parameter violated a precondition (wrong dimension, modulus
    /// mismatch, value out of range, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operation would exceed a configured size cap (vertex cap,
    /// enumeration budget, clique count budget).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The branch-and-bound node budget ran out. Carries the best
    /// independent set found so far, which is still a valid lower bound.
    #[error("solver budget exhausted after {nodes} nodes (best found: {})", best.len())]
    BudgetExhausted { nodes: u64, best: Vec<u32> },

    /// Requested a perfect Lee code outside the constructive regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A received word could not have been produced by this code over a
    /// nearest-neighbor-error channel.
    #[error("corrupt input: {0}")]
    CorruptInput(String),

    /// An internal consistency check failed. This is a bug, not a usage
    /// error.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
