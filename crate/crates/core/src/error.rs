use chrono::{DateTime, NaiveDate, Utc};
use thiserror::Error;

/// Errors produced by the forecasting pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input is empty")]
    Empty,

    #[error("non-finite value at {0}")]
    NonFinite(DateTime<Utc>),

    #[error("negative occupancy {value} at {at}")]
    NegativeOccupancy { at: DateTime<Utc>, value: f64 },

    #[error("invalid split boundaries: {0}")]
    InvalidSplit(String),

    #[error("series contains {count} missing value(s), first at index {first}")]
    MissingValues { count: usize, first: usize },

    #[error("constant training series (lo == hi == {0}); cannot fit scaler")]
    ConstantSeries(f64),

    #[error("series does not start at midnight")]
    NotDayAligned,

    #[error("length {len} is not a whole number of days")]
    PartialDay { len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series too short: need {needed} points, have {have}")]
    TooShort { needed: usize, have: usize },

    #[error("labels contain a single class")]
    SingleClass,

    #[error("seasonal-naive scale is zero (training history is exactly periodic)")]
    ZeroScale,

    #[error("objective is not finite at any evaluated point")]
    NonFiniteObjective,

    #[error("insufficient history before {origin}: need {needed} hours, have {have}")]
    InsufficientHistory {
        origin: NaiveDate,
        needed: usize,
        have: usize,
    },

    #[error("missing value at {0} inside the backtest region")]
    MissingInWindow(DateTime<Utc>),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("lower bound exceeds upper bound at origin {origin}, horizon {horizon}")]
    InvertedInterval { origin: NaiveDate, horizon: usize },

    #[error("origins must increase by exactly one day: {prev} followed by {next}")]
    UnorderedOrigins { prev: NaiveDate, next: NaiveDate },

    #[error("p-value {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of numeric procedures (as opposed to bad input data).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteObjective | Error::ZeroScale | Error::SingleClass
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
