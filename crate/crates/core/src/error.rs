use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("subsystem label {label} out of range 1..={parties}")]
    SubsystemOutOfRange { label: usize, parties: usize },

    #[error("subsystem set must not be empty")]
    EmptySubsystemSet,

    #[error("cut must be a proper nonempty subset of the subsystems")]
    TrivialCut,

    #[error("subsystem sets overlap")]
    OverlappingSubsystems,

    #[error("unsupported dimensions {dims:?}: {reason}")]
    UnsupportedDims { dims: Vec<usize>, reason: String },

    #[error("size limit exceeded: {what} is {got}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerically ambiguous: {0}")]
    NumericalDegeneracy(String),

    #[error("invalid stabilizer generators: {0}")]
    InvalidStabilizer(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input files rather than by the analysis.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Json(_) | Error::Io(_))
    }
}
