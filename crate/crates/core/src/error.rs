use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("empty input")]
    Empty,

    #[error("entries sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("column {column} sums to {sum}, expected 1")]
    ColumnNotNormalized { column: usize, sum: f64 },

    #[error("column {column} has no positive mass")]
    ZeroColumn { column: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("system is learnable (rank {rank} = N), no null vector exists")]
    SystemLearnable { rank: usize },

    #[error("base prior has no mass where the null vector is negative; retry with the uniform prior")]
    BadBase,

    #[error("index {index} out of range for {len} symbols")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no observations recorded")]
    EmptyCounter,

    #[error("system is not learnable: rank {rank} < N = {required}")]
    NotLearnable { rank: usize, required: usize },

    #[error("singular system (sigma_min = {sigma_min})")]
    SingularSystem { sigma_min: f64 },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("bad file {path}: {reason}")]
    BadFile { path: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("value at point {index} is not positive ({value}); cannot take log")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
