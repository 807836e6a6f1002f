use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("edge ({u}, {v}) has invalid weight {weight}; weights must be finite and > 0")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),

    #[error("index set is not strictly increasing at position {0}")]
    UnsortedIndexSet(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("OMP stagnated after {} columns with residual {residual:e}", partial.len())]
    OmpStagnation { partial: Vec<usize>, residual: f64 },

    #[error("ISCP aborted in round {round}: {source}")]
    IscpAborted {
        round: usize,
        /// Cluster label per vertex for the rounds that completed.
        partial: Vec<Option<usize>>,
        #[source]
        source: Box<Error>,
    },

    #[error("exhaustive enumeration needs {needed} subsets, budget is {budget}; use sampled mode")]
    EnumerationBudget { needed: u128, budget: u128 },

    #[error("column submatrix is rank deficient (smallest singular value {sigma_min:e})")]
    RankDeficient { sigma_min: f64 },

    #[error("eigensolver failed to converge: {0}")]
    Eigensolver(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}
