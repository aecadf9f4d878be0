use thiserror::Error;

/// Errors produced by the ordinal time series toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OtsError {
    #[error("series is empty")]
    EmptySeries,

    #[error("code {code} at position {position} is outside the state range 0..={max}")]
    CodeOutOfRange {
        position: usize,
        code: i64,
        max: usize,
    },

    #[error("state space needs at least two distinct states, got {0}")]
    TooFewStates(usize),

    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown state label {0:?}")]
    UnknownLabel(String),

    #[error("lag {lag} is invalid for a series of length {len}")]
    InvalidLag { lag: usize, len: usize },

    #[error("invalid distance matrix: {0}")]
    InvalidDistance(String),

    #[error("distance {0} is not supported here; only the block distance is")]
    UnsupportedDistance(String),

    #[error("dispersion is zero (constant series); the statistic is undefined")]
    UndefinedDispersion,

    #[error("cumulative probability at state index {index} is {value}; it must lie strictly inside (0, 1)")]
    DegenerateState { index: usize, value: f64 },

    #[error("numeric series has zero variance")]
    ZeroVariance,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series do not share one state space")]
    StateSpaceMismatch,

    #[error("standard error is zero; the series is degenerate for this statistic")]
    ZeroStandardError,

    #[error("normalization requested but d(s0, sn) is zero")]
    ZeroNormalizer,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, OtsError>;
