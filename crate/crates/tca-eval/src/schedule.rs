use tca_core::{Cluster, MINUTES_PER_DAY};

use crate::error::EvalError;

const DAY: f64 = MINUTES_PER_DAY as f64;

/// Compressor-on intervals within one day: sorted, disjoint, half-open
/// `[start, end)` minute spans. The common currency all algorithms are
/// evaluated in.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSchedule {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSchedule {
    /// Validates an already sorted, disjoint interval list.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self, EvalError> {
        let mut prev_end = 0.0f64;
        for &(start, end) in &intervals {
            if !(start.is_finite() && end.is_finite()) || start < prev_end || end <= start
                || end > DAY
            {
                return Err(EvalError::InvalidConfig(format!(
                    "bad interval [{start}, {end})"
                )));
            }
            prev_end = end;
        }
        Ok(IntervalSchedule { intervals })
    }

    /// Normalizes arbitrary spans: clips to the day, drops empty ones,
    /// sorts, and merges overlapping or touching neighbors.
    pub fn from_raw(mut spans: Vec<(f64, f64)>) -> Self {
        for span in &mut spans {
            span.0 = span.0.clamp(0.0, DAY);
            span.1 = span.1.clamp(0.0, DAY);
        }
        spans.retain(|&(s, e)| e > s);
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (start, end) in spans {
            match merged.last_mut() {
                Some(last) if start <= last.1 => last.1 = last.1.max(end),
                _ => merged.push((start, end)),
            }
        }
        IntervalSchedule { intervals: merged }
    }

    /// Converts bin clusters to minute intervals: `[start_bin * period,
    /// (end_bin + 1) * period)`.
    pub fn from_clusters(clusters: &[Cluster], period: u32) -> Self {
        let intervals = clusters
            .iter()
            .map(|c| (c.start_minute(period) as f64, c.end_minute(period) as f64))
            .collect();
        IntervalSchedule { intervals }
    }

    /// The always-on schedule: one interval covering the whole day.
    pub fn full_day() -> Self {
        IntervalSchedule { intervals: vec![(0.0, DAY)] }
    }

    pub fn empty() -> Self {
        IntervalSchedule::default()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn covers(&self, minute: f64) -> bool {
        self.intervals.iter().any(|&(s, e)| minute >= s && minute < e)
    }

    pub fn on_minutes(&self) -> f64 {
        self.intervals.iter().map(|&(s, e)| e - s).sum()
    }

    pub fn on_hours(&self) -> f64 {
        self.on_minutes() / 60.0
    }

    /// Extends every interval `lead` minutes earlier (pre-cooling), then
    /// renormalizes.
    pub fn with_lead_time(&self, lead: f64) -> Self {
        if lead <= 0.0 {
            return self.clone();
        }
        Self::from_raw(self.intervals.iter().map(|&(s, e)| (s - lead, e)).collect())
    }
}
