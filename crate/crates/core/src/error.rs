use thiserror::Error;

use crate::syntax::SyntaxError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("tree would hold {nodes} nodes, above the cap of {cap}")]
    NodeCap { nodes: u64, cap: u64 },

    #[error("depth {depth} exceeds {max} for a materialized tree; use counts-only mode")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("step {step} is outside 0..={depth}")]
    StepOutOfRange { step: usize, depth: usize },

    #[error("integer overflow computing Fibonacci index {n}")]
    Overflow { n: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "truncation tail {tail:.3e} at theta={theta}, n_max={n_max} exceeds tolerance {tolerance:.1e}"
    )]
    TailTolerance {
        theta: f64,
        n_max: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
