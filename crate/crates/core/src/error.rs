use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("weight {index} = {value} is outside (0, 1]")]
    InvalidWeight { index: usize, value: f64 },

    #[error("label must be -1 or +1, got {0}")]
    InvalidLabel(i64),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("degenerate model: decision vector is zero")]
    DegenerateModel,

    #[error("invalid static mask: {0}")]
    InvalidMask(String),

    #[error("constraint gradient vanished at residual {residual:.3e}; descent cannot proceed")]
    StationaryConstraint { residual: f64 },

    #[error("target margin unreachable: {0}")]
    TargetUnreachable(String),

    #[error("no support vector qualifies as a baseline: {0}")]
    NoQualifyingSupportVector(String),

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("SMO did not converge after {iterations} iterations (KKT gap {gap:.3e})")]
    TrainingDidNotConverge { iterations: usize, gap: f64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("no points of the undesirable class")]
    NoUndesirablePoints,

    #[error("missing feature `{0}`")]
    MissingFeature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("csv error at row {row}, column {column}: {message}")]
    Csv { row: usize, column: usize, message: String },

    #[error("unknown label value `{0}`")]
    UnknownLabel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used by the HTTP error body.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::InvalidLabel(_) => "invalid_label",
            Error::InvalidKernel(_) => "invalid_kernel",
            Error::InvalidModel(_) => "invalid_model",
            Error::DegenerateModel => "degenerate_model",
            Error::InvalidMask(_) => "invalid_mask",
            Error::StationaryConstraint { .. } => "stationary_constraint",
            Error::TargetUnreachable(_) => "target_unreachable",
            Error::NoQualifyingSupportVector(_) => "no_qualifying_support_vector",
            Error::SingleClass => "single_class",
            Error::TrainingDidNotConverge { .. } => "training_not_converged",
            Error::EmptyDataset => "empty_dataset",
            Error::NoUndesirablePoints => "no_undesirable_points",
            Error::MissingFeature(_) => "missing_feature",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse { .. } => "parse_error",
            Error::Csv { .. } => "csv_error",
            Error::UnknownLabel(_) => "unknown_label",
            Error::Io(_) => "io_error",
            Error::Json(_) => "json_error",
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
