//! Seeded synthetic usage generators.
//!
//! A day is simulated as a renewal process: starting at midnight, gaps are
//! drawn from an exponential whose mean depends on the shift the gap
//! starts in, and each landing point inside the day becomes an event.
//! Gaps are not re-split at shift boundaries, so a long gap drawn late in
//! a sparse shift overshoots into the next one; the default profiles keep
//! pre-block shifts short-gapped so that overshoot stays small.
//!
//! The default commercial profile is calibrated so the realized mean daily
//! count lands on 60.2 withdrawals per day; the residential profile is a
//! flatter, less frequent pattern.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tca_core::{Day, EventLog, MINUTES_PER_DAY};

use crate::error::EvalError;

const DAY_MINUTES: f64 = MINUTES_PER_DAY as f64;

/// One shift: a `[start, end)` minute span with its mean inter-event gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    pub start: f64,
    pub end: f64,
    pub mean_gap: f64,
}

/// A full-day usage pattern: shifts partitioning `[0, 1440)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftProfile {
    pub name: String,
    shifts: Vec<Shift>,
}

impl ShiftProfile {
    /// Validates that the shifts exactly partition the day, in order,
    /// with positive mean gaps.
    pub fn new(name: impl Into<String>, shifts: Vec<Shift>) -> Result<Self, EvalError> {
        if shifts.is_empty() {
            return Err(EvalError::InvalidConfig("profile has no shifts".into()));
        }
        let mut cursor = 0.0f64;
        for shift in &shifts {
            if shift.start != cursor {
                return Err(EvalError::InvalidConfig(format!(
                    "shift starting at {} leaves a gap after {cursor}",
                    shift.start
                )));
            }
            if shift.end <= shift.start {
                return Err(EvalError::InvalidConfig(format!(
                    "shift [{}, {}) is empty or reversed",
                    shift.start, shift.end
                )));
            }
            if !(shift.mean_gap.is_finite() && shift.mean_gap > 0.0) {
                return Err(EvalError::InvalidConfig(format!(
                    "shift [{}, {}) has invalid mean gap {}",
                    shift.start, shift.end, shift.mean_gap
                )));
            }
            cursor = shift.end;
        }
        if cursor != DAY_MINUTES {
            return Err(EvalError::InvalidConfig(format!(
                "shifts end at {cursor}, not 1440"
            )));
        }
        Ok(ShiftProfile { name: name.into(), shifts })
    }

    pub fn shifts(&self) -> &[Shift] {
        &self.shifts
    }

    /// The shift containing minute `t`.
    pub fn shift_at(&self, t: f64) -> &Shift {
        self.shifts
            .iter()
            .find(|s| t >= s.start && t < s.end)
            .unwrap_or_else(|| self.shifts.last().expect("non-empty"))
    }

    /// Closed-form expected events per day, ignoring boundary overshoot:
    /// the sum of shift duration over mean gap.
    pub fn expected_daily_events(&self) -> f64 {
        self.shifts.iter().map(|s| (s.end - s.start) / s.mean_gap).sum()
    }

    /// Commercial pattern: dense office hours with a lunch lull, busy
    /// morning and evening shoulders, near-silent night.
    ///
    /// Gap values are calibrated so the realized mean lands on 60.2
    /// events/day (the closed-form sum reads higher because gaps drawn
    /// late in a slow shift overshoot into the next one).
    pub fn commercial() -> Self {
        ShiftProfile::new(
            "cs",
            vec![
                Shift { start: 0.0, end: 240.0, mean_gap: 130.0 },
                Shift { start: 240.0, end: 420.0, mean_gap: 25.0 },
                Shift { start: 420.0, end: 720.0, mean_gap: 14.0 },
                Shift { start: 720.0, end: 780.0, mean_gap: 30.0 },
                Shift { start: 780.0, end: 1080.0, mean_gap: 14.0 },
                Shift { start: 1080.0, end: 1380.0, mean_gap: 27.0 },
                Shift { start: 1380.0, end: 1440.0, mean_gap: 150.0 },
            ],
        )
        .expect("static profile is valid")
    }

    /// Residential pattern: steadier use across waking hours, less
    /// frequent overall than the commercial profile.
    pub fn residential() -> Self {
        ShiftProfile::new(
            "rs",
            vec![
                Shift { start: 0.0, end: 360.0, mean_gap: 120.0 },
                Shift { start: 360.0, end: 1380.0, mean_gap: 18.0 },
                Shift { start: 1380.0, end: 1440.0, mean_gap: 150.0 },
            ],
        )
        .expect("static profile is valid")
    }
}

/// The built-in commercial and residential profiles.
pub fn default_profiles() -> (ShiftProfile, ShiftProfile) {
    (ShiftProfile::commercial(), ShiftProfile::residential())
}

fn exponential_gap<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    // inverse CDF on a [0, 1) uniform; u = 0 gives gap 0, never infinity
    let u: f64 = rng.gen();
    -mean * (1.0 - u).ln()
}

fn gen_day_with<R: Rng>(profile: &ShiftProfile, rng: &mut R) -> Day {
    let mut events = Vec::new();
    let mut t = 0.0f64;
    loop {
        let gap = exponential_gap(rng, profile.shift_at(t).mean_gap);
        t += gap;
        if t >= DAY_MINUTES {
            break;
        }
        events.push(t);
    }
    events
}

/// One simulated day, deterministic for a given `(profile, seed)`.
pub fn gen_day(profile: &ShiftProfile, seed: u64) -> Day {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_day_with(profile, &mut rng)
}

/// A multi-day log drawn from one seeded stream.
pub fn gen_log(profile: &ShiftProfile, days: usize, seed: u64) -> EventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let days: Vec<Day> = (0..days).map(|_| gen_day_with(profile, &mut rng)).collect();
    EventLog::new(days).expect("generated events are in range and sorted")
}
