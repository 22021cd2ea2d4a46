use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch in {what}: expected {expected}, got {got}")]
    LengthMismatch { what: String, expected: usize, got: usize },

    #[error("functions 1, F_1, ..., F_n are linearly dependent (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("invalid sample space: {0}")]
    InvalidSampleSpace(String),

    #[error("binomial family needs n >= 1, got {0}")]
    InvalidN(i64),

    #[error("simplex dimension must be >= 1, got {0}")]
    InvalidM(i64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    Empty,

    #[error("unit mismatch: {0}")]
    UnitMismatch(String),

    #[error("F(x_m) - F(x_{index}) is not integral: {value}")]
    NonIntegralF { index: usize, value: String },

    #[error("distribution has no exact rational weights")]
    NonRationalWeights,

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("affine chart {chart} is singular at this point")]
    ChartSingular { chart: usize },

    #[error("linear part of the affine map is not invertible")]
    NotInvertible,

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
