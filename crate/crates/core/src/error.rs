use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("division by zero: minor {spec} vanishes")]
    ZeroMinor { spec: String },

    #[error("row sums and column sums of the targets differ ({rows} vs {cols})")]
    InconsistentTargets { rows: String, cols: String },

    #[error("no convergence after {iterations} iterations (residual {residual})")]
    Convergence { iterations: usize, residual: String },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("work limit exceeded: {0}")]
    WorkLimit(String),

    #[error("need {required} records, have {available}")]
    NeedsMoreData { required: usize, available: usize },

    #[error("inconsistent system for |S| = {k}: the conjectured form does not hold for {m}x{n}")]
    ConjectureFalsified { m: usize, n: usize, k: usize },

    #[error("matrix generation failed: {0}")]
    Generation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
