use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("infeasible point: {0}")]
    Infeasible(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "extinction detected: prox output fell into the nullspace; \
         reduce sigma below the extinction lower bound {sigma_lower}"
    )]
    Extinction { sigma_lower: f64 },

    #[error("solver did not converge within {iters} iterations (gap {gap})")]
    NonConvergence { iters: usize, gap: f64 },

    #[error("flow diverged at step {step}: {what}")]
    FlowDiverged { step: usize, what: String },

    #[error("refinement level {level} is disconnected ({components} components)")]
    DisconnectedLevel { level: usize, components: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
