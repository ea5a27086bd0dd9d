use core::fmt;

/// Errors reported by the clustering pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The bin period does not evenly divide the 1440-minute day.
    InvalidPeriod { period: u32 },
    /// An event log with zero days was given where data is required.
    EmptyLog,
    /// An event time lies outside `[0, 1440)` or is not finite.
    EventOutOfRange { minute: f64 },
    /// A density value is negative or not finite.
    InvalidDensity { value: f64 },
    /// The bin vector length does not match `1440 / period`.
    BinCountMismatch { expected: usize, got: usize },
    /// Threshold parameters violate their constraints for the given period.
    InvalidThreshold { ell: u32, period: u32 },
    /// A negative or non-finite density threshold.
    InvalidDensityThreshold { d_star: f64 },
    /// No bin exceeds the density threshold; there is nothing to cluster.
    EmptySystem,
    /// The incremental day counter is exhausted; caller must reset.
    DayCountOverflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPeriod { period } => {
                write!(f, "period {period} does not divide 1440 minutes")
            }
            Error::EmptyLog => write!(f, "event log contains no days"),
            Error::EventOutOfRange { minute } => {
                write!(f, "event time {minute} outside [0, 1440)")
            }
            Error::InvalidDensity { value } => write!(f, "invalid density value {value}"),
            Error::BinCountMismatch { expected, got } => {
                write!(f, "expected {expected} bins, got {got}")
            }
            Error::InvalidThreshold { ell, period } => write!(
                f,
                "time threshold {ell} must be a positive multiple of period {period}"
            ),
            Error::InvalidDensityThreshold { d_star } => {
                write!(f, "density threshold {d_star} must be finite and non-negative")
            }
            Error::EmptySystem => write!(f, "no populated bins under the density threshold"),
            Error::DayCountOverflow => write!(f, "day counter exhausted (255 days ingested)"),
        }
    }
}

impl core::error::Error for Error {}
