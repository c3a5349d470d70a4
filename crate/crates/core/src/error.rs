use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("matrix dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("Gaussian kernel under-resolved: spacing {spacing} exceeds 1.0")]
    KernelUnderresolved { spacing: f64 },

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("outcome {qbar} has zero probability (N^2 = {norm_sq:e})")]
    ZeroProbabilityOutcome { qbar: f64, norm_sq: f64 },

    #[error("invalid hit parameters: {0}")]
    InvalidHitParams(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid classical distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid spin amplitudes: {0}")]
    InvalidAmplitudes(String),

    #[error("conditioning on a null event at cell ({i}, {j}): mass {mass:e} below threshold {threshold:e}")]
    ConditionOnNullEvent {
        i: usize,
        j: usize,
        mass: f64,
        threshold: f64,
    },

    #[error("time step {dt} exceeds the transport bound {dt_max}")]
    StepTooLarge { dt: f64, dt_max: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("unsupported classical state: {0}")]
    UnsupportedClassicalState(String),

    #[error("off-diagonal propagation unstable: transform multiplier {multiplier:e} on a mode carrying mass")]
    OffDiagonalUnstable { multiplier: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::GridMismatch => "GridMismatch",
            Error::DimMismatch { .. } => "DimMismatch",
            Error::KernelUnderresolved { .. } => "KernelUnderresolved",
            Error::GridTooNarrow(_) => "GridTooNarrow",
            Error::ZeroProbabilityOutcome { .. } => "ZeroProbabilityOutcome",
            Error::InvalidHitParams(_) => "InvalidHitParams",
            Error::InvalidDensityMatrix(_) => "InvalidDensityMatrix",
            Error::InvalidDistribution(_) => "InvalidDistribution",
            Error::InvalidAmplitudes(_) => "InvalidAmplitudes",
            Error::ConditionOnNullEvent { .. } => "ConditionOnNullEvent",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonFiniteState { .. } => "NonFiniteState",
            Error::UnsupportedClassicalState(_) => "UnsupportedClassicalState",
            Error::OffDiagonalUnstable { .. } => "OffDiagonalUnstable",
            Error::Parse { .. } => "ParseError",
            Error::Validation(_) => "ValidationError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "IoError",
        }
    }
}
