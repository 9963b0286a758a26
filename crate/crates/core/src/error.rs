use alloc::string::String;

/// Errors raised by the volume-estimation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("analyte panel must contain at least one analyte")]
    EmptyPanel,
    #[error("analyte code must be non-empty and free of tabs, commas and line breaks: {0:?}")]
    InvalidAnalyteCode(String),
    #[error("duplicate analyte code {0:?}")]
    DuplicateAnalyte(String),
    #[error("unknown analyte {0:?}")]
    UnknownAnalyte(String),
    #[error("panel mismatch: expected {expected} values, found {found}")]
    PanelMismatch { expected: usize, found: usize },
    #[error("invalid analyte amount {value} at position {index}: amounts must be finite and >= 0")]
    InvalidValue { index: usize, value: f64 },
    #[error("invalid volume {value} at row {row}: volumes must be finite and > 0")]
    InvalidVolume { row: usize, value: f64 },
    #[error("volume count {volumes} does not match sample count {samples}")]
    VolumeCountMismatch { samples: usize, volumes: usize },
    #[error("cohort has no volumes")]
    MissingVolumes,
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("scale factor must be finite and > 0, got {0}")]
    InvalidScale(f64),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("coefficient vector has wrong length: expected {expected}, found {found}")]
    CoefficientMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("normal matrix is not numerically positive definite")]
    NotPositiveDefinite,
    #[error("correlation is undefined (fewer than two points or zero variance)")]
    UndefinedCorrelation,
    #[error("{n} samples are not enough for {folds}-fold cross-validation")]
    InsufficientSamples { n: usize, folds: usize },
    #[error(
        "exhaustive search would evaluate {candidates} subsets (budget {budget}); use greedy forward selection instead"
    )]
    SearchBudgetExceeded { candidates: u128, budget: u128 },
}

pub type Result<T> = core::result::Result<T, Error>;
