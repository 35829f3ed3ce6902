use thiserror::Error;

/// Errors raised by group construction, metrics and the verification suites.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("coordinate {coord} out of range for factor {factor}")]
    CoordinateOutOfRange { factor: usize, coord: String },

    #[error("factor index {0} out of range")]
    InvalidFactorIndex(usize),

    #[error("factor {0} is not peripheral")]
    NotPeripheral(usize),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation requires the standard generating set")]
    UnsupportedMode,

    #[error("value cannot be certified inside the explored ball: {0}")]
    OutOfRange(String),

    #[error("ball of radius {radius} exceeds the budget of {cap} elements")]
    Budget { radius: u32, cap: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("fit infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn out_of_range(what: impl Into<String>) -> Self {
        Error::OutOfRange(what.into())
    }

    pub fn is_out_of_range(&self) -> bool {
        matches!(self, Error::OutOfRange(_))
    }
}
