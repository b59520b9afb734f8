use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("denominator has no nonzero coefficient")]
    ZeroDenominator,
    #[error("system has a pole on the imaginary axis at omega = {omega} rad/s")]
    PoleOnAxis { omega: f64 },
    #[error("division by an identically zero system")]
    DivisionByZeroSystem,
    #[error("system is improper (numerator degree exceeds denominator degree)")]
    ImproperSystem,
    #[error("system is unstable")]
    UnstableSystem,
    #[error("system is not strictly proper, its H2 norm is infinite")]
    NotStrictlyProper,
    #[error("step response has not settled within 1% over its final 10% of samples")]
    NotSettled,
    #[error("system has zero DC gain")]
    ZeroDcGain,
    #[error("invalid frequency {omega} rad/s")]
    InvalidFrequency { omega: f64 },
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("{path}:{line}: column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        column: usize,
        message: String,
    },
    #[error("frequencies must be strictly increasing (violated at index {index})")]
    NonMonotonicFrequency { index: usize },
    #[error("duplicate frequency {omega} rad/s")]
    DuplicateFrequency { omega: f64 },
    #[error("frequency-response data needs {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error(
        "frequency-response data lengths differ ({frequencies} frequencies, {responses} responses)"
    )]
    LengthMismatch {
        frequencies: usize,
        responses: usize,
    },
    #[error("omega = {omega} rad/s outside data band [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },
    #[error("frequency bands do not overlap as required: {0}")]
    BandMismatch(String),
    #[error("1 + G(jw) vanishes at omega = {omega} rad/s")]
    SingularBilinear { omega: f64 },
    #[error("epsilon must satisfy 0 < epsilon < 1, got {0}")]
    InvalidEpsilon(f64),
    #[error("loop 1 - Zt*Y is identically zero")]
    DegenerateLoop,
    #[error("load is not passive: Re Y(jw) = {re} at omega = {omega} rad/s")]
    NotPassiveLoad { omega: f64, re: f64 },
    #[error("transparency is identically zero, no destabilizing peak exists")]
    NoPeak,
    #[error("invalid load model: {0}")]
    InvalidLoad(String),
    #[error("operation needs a transfer-function model, got frequency-response data")]
    NeedsModel,
    #[error("insufficient data: {needed} points required, {got} available")]
    InsufficientData { needed: usize, got: usize },
    #[error(
        "ill-conditioned fit (normal-equation condition number {condition:.3e}); try lower orders"
    )]
    IllConditioned { condition: f64 },
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
