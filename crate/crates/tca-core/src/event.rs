use alloc::vec::Vec;

use crate::error::Error;

/// Minutes in one day; all event times live in `[0, MINUTES_PER_DAY)`.
pub const MINUTES_PER_DAY: u32 = 1440;

/// One day of usage: event times as minute-of-day, sorted non-decreasing.
pub type Day = Vec<f64>;

/// A multi-day log of usage events, the raw input to the pipeline.
///
/// Each day is an independent series; day boundaries are hard at midnight.
/// The log may be empty (zero days), which downstream operations reject
/// where data is required.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventLog {
    days: Vec<Day>,
}

impl EventLog {
    /// Builds a log from per-day event times, sorting each day and
    /// rejecting times outside `[0, 1440)`.
    pub fn new(mut days: Vec<Day>) -> Result<Self, Error> {
        for day in &mut days {
            for &t in day.iter() {
                if !t.is_finite() || t < 0.0 || t >= MINUTES_PER_DAY as f64 {
                    return Err(Error::EventOutOfRange { minute: t });
                }
            }
            day.sort_by(f64::total_cmp);
        }
        Ok(EventLog { days })
    }

    pub fn days(&self) -> &[Day] {
        &self.days
    }

    pub fn num_days(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    /// Total event count across all days.
    pub fn total_events(&self) -> usize {
        self.days.iter().map(Vec::len).sum()
    }
}
