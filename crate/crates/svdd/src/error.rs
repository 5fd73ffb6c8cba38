//! Error type shared by every module in the crate.

/// Errors produced by dataset validation, bandwidth selection, training,
/// scoring, and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Dataset has no rows or no columns.
    #[error("empty data: {0}")]
    EmptyData(&'static str),
    /// A coordinate is NaN or infinite.
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    /// Rows do not all have the same number of columns.
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    /// A weight is missing, below one, or not an integer.
    #[error("weight at row {row} must be a positive integer, got {value}")]
    BadWeights { row: usize, value: f64 },
    /// The operation needs more observations than the dataset has.
    #[error("need at least {needed} observations, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    /// A pairwise-distance statistic is zero, so no bandwidth exists.
    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),
    /// The logarithm in a bandwidth formula is not positive.
    #[error("log argument {arg} must exceed 1 for a positive bandwidth")]
    LogDomain { arg: f64 },
    /// The weighted criterion was asked for on a dataset without weights.
    #[error("dataset has no weights")]
    MissingWeights,
    /// Evaluation was asked for on a dataset without labels.
    #[error("dataset has no labels")]
    MissingLabels,
    /// Bandwidth is not a positive finite number.
    #[error("bandwidth must be positive and finite, got {0}")]
    BadBandwidth(f64),
    /// The dual constraints admit no feasible point.
    #[error("dual problem infeasible: n*C = {0} < 1")]
    Infeasible(f64),
    /// Observation dimension differs from the model dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A 2-D-only operation was called on a higher-dimensional model.
    #[error("operation requires 2-dimensional data, got {0} dimensions")]
    NotTwoDimensional(usize),
    /// No support vector strictly between the bounds and no interior point
    /// to anchor the threshold on.
    #[error("no boundary support vector available to determine the threshold")]
    NoBoundarySv,
    /// Dense kernel matrix would exceed the supported size.
    #[error("kernel matrix for {n} observations exceeds the {max}-row limit")]
    KernelTooLarge { n: usize, max: usize },
    /// A configuration value is outside its documented domain.
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    /// A simulation parameter is outside its documented domain.
    #[error("bad parameters: {0}")]
    BadParams(String),
    /// Every bandwidth in a grid search failed to train.
    #[error("every bandwidth in the search grid failed to train")]
    AllFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
