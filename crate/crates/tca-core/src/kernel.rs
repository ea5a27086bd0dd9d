//! Fixed-memory clustering pipeline for microcontroller-class targets.
//!
//! [`KernelState`] re-implements the whole pipeline (incremental binning,
//! mode threshold, percolation sweep, cluster emission) against a hard
//! memory budget: one 8-bit scaled-density counter per 10-minute bin, a
//! 1-bit populated mask, and a handful of scalar registers. No operation
//! allocates, and the per-bin period is fixed at 10 minutes so the whole
//! state is a compile-time constant comfortably under 512 bytes.
//!
//! Densities are stored in 1/8 units (3 fraction bits), merged per day as
//! an integer running mean, so the state tracks the exact floating mean of
//! the reference pipeline to within about one scaled unit. Threshold
//! comparisons are exact integer arithmetic on the scaled counters: a bin
//! is populated iff `2 * N * bins[i] > t_fine`, where `t_fine` is `0`
//! (comfort), `2 * sum` (eco, i.e. the scaled mean), or
//! `2 * sum - isqrt(N * sum_sq - sum^2)` (balance, mean minus half the
//! population standard deviation), saturating at zero. Runs whose decision
//! sits within one or two scaled units of the threshold are flagged so
//! callers can tell principled divergence from the float reference apart
//! from real disagreement.

use crate::cluster::Cluster;
use crate::error::Error;
use crate::threshold::Mode;

/// Bins per day at the fixed 10-minute kernel period.
pub const KERNEL_BINS: usize = 144;
/// The kernel's hard-wired bin width in minutes.
pub const KERNEL_PERIOD: u32 = 10;
/// Fixed-point scale for stored densities (3 fraction bits).
pub const DENSITY_SCALE: u32 = 8;
/// Capacity of the fixed cluster output buffer.
pub const MAX_CLUSTERS: usize = 16;

const MASK_BYTES: usize = KERNEL_BINS / 8;
/// Populated-decision margin (in `2 * N * scaled` fine units) below which
/// the rounding flag is raised: 1.75 scaled units = 0.21875 events/day,
/// wide enough to cover accumulated running-mean drift plus the threshold
/// drift it induces.
const ROUNDING_MARGIN_FINE: i64 = 2 * KERNEL_BINS as i64 * 14 / 8;

/// Scalar working registers for the sweep, kept in the state so the whole
/// working set is one fixed block.
#[derive(Debug, Clone, Copy, Default)]
struct Control {
    threshold_fine: u32,
    ell: u16,
    critical_ell: u16,
    selected_ell: u16,
    prev_largest: u8,
    max_jump: u8,
    largest: u8,
    second: u8,
    last_index: u8,
    run_mass: u8,
}

/// Outcome flags for one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KernelRun {
    pub selected_ell: u32,
    pub critical_ell: u32,
    /// Some density counter clipped at 255 at ingest time.
    pub saturated: bool,
    /// Some populated decision was within rounding distance of the
    /// threshold; the reference pipeline may disagree on this input.
    pub rounding_boundary: bool,
    /// More clusters than the buffer holds; the excess merged into the
    /// last slot.
    pub truncated: bool,
}

/// Fixed cluster output buffer, filled by [`KernelState::run_tca`].
#[derive(Debug, Clone, Copy)]
pub struct ClusterBuf {
    spans: [(u8, u8); MAX_CLUSTERS],
    len: u8,
}

impl ClusterBuf {
    pub const fn new() -> Self {
        ClusterBuf { spans: [(0, 0); MAX_CLUSTERS], len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Emitted clusters as `(start_bin, end_bin)` spans, inclusive.
    pub fn spans(&self) -> &[(u8, u8)] {
        &self.spans[..self.len as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = Cluster> + '_ {
        self.spans().iter().map(|&(s, e)| Cluster {
            start_bin: s as usize,
            end_bin: e as usize,
        })
    }

    fn clear(&mut self) {
        self.len = 0;
    }

    /// Appends a span; on overflow extends the last span instead and
    /// reports it.
    fn push(&mut self, start: u8, end: u8) -> bool {
        if (self.len as usize) < MAX_CLUSTERS {
            self.spans[self.len as usize] = (start, end);
            self.len += 1;
            true
        } else {
            self.spans[MAX_CLUSTERS - 1].1 = end;
            false
        }
    }
}

impl Default for ClusterBuf {
    fn default() -> Self {
        Self::new()
    }
}

const FLAG_SATURATED: u8 = 1;
const FLAG_ROUNDING: u8 = 1 << 1;

/// The complete working state of the fixed-memory pipeline.
#[derive(Debug, Clone)]
pub struct KernelState {
    bins: [u8; KERNEL_BINS],
    populated_mask: [u8; MASK_BYTES],
    day_count: u8,
    flags: u8,
    control: Control,
}

const _: () = assert!(core::mem::size_of::<KernelState>() <= 512);
const _: () = assert!(core::mem::size_of::<KernelState>() <= 300);
const _: () =
    assert!(core::mem::size_of::<KernelState>() + core::mem::size_of::<ClusterBuf>() <= 512);

impl KernelState {
    pub const fn new() -> Self {
        KernelState {
            bins: [0; KERNEL_BINS],
            populated_mask: [0; MASK_BYTES],
            day_count: 0,
            flags: 0,
            control: Control {
                threshold_fine: 0,
                ell: 0,
                critical_ell: 0,
                selected_ell: 0,
                prev_largest: 0,
                max_jump: 0,
                largest: 0,
                second: 0,
                last_index: 0,
                run_mass: 0,
            },
        }
    }

    pub fn day_count(&self) -> u32 {
        self.day_count as u32
    }

    /// True once any counter has clipped at 255.
    pub fn saturated(&self) -> bool {
        self.flags & FLAG_SATURATED != 0
    }

    /// True once ingest rounding has erased or blurred a low count.
    pub fn rounding_flagged(&self) -> bool {
        self.flags & FLAG_ROUNDING != 0
    }

    /// Stored density of a bin, de-scaled to events per day.
    pub fn bin_density(&self, bin: usize) -> f64 {
        self.bins[bin] as f64 / DENSITY_SCALE as f64
    }

    /// Merges one day (sorted minute-of-day events) into the running
    /// per-bin means.
    ///
    /// `bins[i] <- round((bins[i] * days + 8 * count_i) / (days + 1))`,
    /// clipping at 255 with the saturation flag. Rounding a fresh nonzero
    /// count down to zero raises the rounding flag.
    ///
    /// Integer rounding makes decay stall: once a stored value drops to
    /// `(days + 1) / 2` or below, an empty day rounds back to the same
    /// value, so a bin whose events all came early retains a few eighths
    /// above the true mean. Steadily-fed bins track the exact mean to
    /// about one scaled unit; the stall only affects sporadic bins far
    /// from any plausible density threshold crossing at small day counts.
    pub fn ingest_day(&mut self, day: &[f64]) -> Result<(), Error> {
        if self.day_count == u8::MAX {
            return Err(Error::DayCountOverflow);
        }
        let mut prev = 0.0f64;
        for &t in day {
            if !t.is_finite() || t < 0.0 || t >= (KERNEL_BINS as u32 * KERNEL_PERIOD) as f64 {
                return Err(Error::EventOutOfRange { minute: t });
            }
            if t < prev {
                return Err(Error::EventOutOfRange { minute: t });
            }
            prev = t;
        }

        let days = self.day_count as u32;
        let mut cursor = 0usize;
        for bin in 0..KERNEL_BINS {
            let upper = (bin as u32 + 1) * KERNEL_PERIOD;
            let mut count = 0u32;
            while cursor < day.len() && day[cursor] < upper as f64 {
                count += 1;
                cursor += 1;
            }
            let num = self.bins[bin] as u32 * days + DENSITY_SCALE * count;
            let den = days + 1;
            let merged = (num + den / 2) / den;
            if merged > u8::MAX as u32 {
                self.bins[bin] = u8::MAX;
                self.flags |= FLAG_SATURATED;
            } else {
                if count > 0 && merged == 0 {
                    self.flags |= FLAG_ROUNDING;
                }
                self.bins[bin] = merged as u8;
            }
        }
        self.day_count += 1;
        Ok(())
    }

    fn mask_get(&self, bin: usize) -> bool {
        self.populated_mask[bin / 8] & (1 << (bin % 8)) != 0
    }

    /// Computes the mode threshold in fine units and refreshes the
    /// populated mask. Returns the populated count.
    fn refresh_populated(&mut self, mode: Mode) -> u32 {
        let mut sum = 0u32;
        let mut sum_sq = 0u64;
        for bin in 0..KERNEL_BINS {
            let v = self.bins[bin] as u32;
            sum += v;
            sum_sq += (v as u64) * (v as u64);
        }
        let n = KERNEL_BINS as u64;
        self.control.threshold_fine = match mode {
            Mode::Comfort => 0,
            Mode::Eco => 2 * sum,
            Mode::Balance => {
                let spread = n * sum_sq - (sum as u64) * (sum as u64);
                let sigma_fine = spread.isqrt();
                (2 * sum as u64).saturating_sub(sigma_fine) as u32
            }
        };

        let t = self.control.threshold_fine as i64;
        let mut populated = 0u32;
        let mut boundary = false;
        for bin in 0..KERNEL_BINS {
            let lhs = 2 * KERNEL_BINS as i64 * self.bins[bin] as i64;
            let on = lhs > t;
            if on {
                populated += 1;
                self.populated_mask[bin / 8] |= 1 << (bin % 8);
            } else {
                self.populated_mask[bin / 8] &= !(1 << (bin % 8));
            }
            if (lhs - t).abs() <= ROUNDING_MARGIN_FINE && !(lhs == 0 && t == 0) {
                boundary = true;
            }
        }
        if boundary {
            self.flags |= FLAG_ROUNDING;
        }
        populated
    }

    /// One clustering pass over the populated mask at the current `ell`
    /// register. Tracks largest/second masses; when `out` is given, emits
    /// the spans into it and reports buffer overflow.
    fn sweep_pass(&mut self, mut out: Option<&mut ClusterBuf>) -> bool {
        let max_gap = (self.control.ell as u32 / KERNEL_PERIOD) as usize;
        self.control.largest = 0;
        self.control.second = 0;
        self.control.run_mass = 0;
        let mut run_start = 0u8;
        let mut fitted = true;
        for bin in 0..KERNEL_BINS {
            if !self.mask_get(bin) {
                continue;
            }
            if self.control.run_mass > 0 && bin - self.control.last_index as usize <= max_gap
            {
                self.control.last_index = bin as u8;
                self.control.run_mass = self.control.run_mass.saturating_add(1);
            } else {
                if self.control.run_mass > 0 {
                    if let Some(buf) = &mut out {
                        fitted &= buf.push(run_start, self.control.last_index);
                    }
                    self.close_run();
                }
                run_start = bin as u8;
                self.control.last_index = bin as u8;
                self.control.run_mass = 1;
            }
        }
        if self.control.run_mass > 0 {
            if let Some(buf) = &mut out {
                fitted &= buf.push(run_start, self.control.last_index);
            }
            self.close_run();
        }
        fitted
    }

    fn close_run(&mut self) {
        let mass = self.control.run_mass;
        if mass > self.control.largest {
            self.control.second = self.control.largest;
            self.control.largest = mass;
        } else if mass > self.control.second {
            self.control.second = mass;
        }
        self.control.run_mass = 0;
    }

    /// Runs the full pipeline at the current state and writes up to
    /// [`MAX_CLUSTERS`] clusters into `out`.
    ///
    /// Cluster boundaries match the reference pipeline on the de-scaled
    /// prototype whenever no counter saturated and no populated decision
    /// sat on a rounding boundary; both conditions are reported in the
    /// returned [`KernelRun`].
    pub fn run_tca(&mut self, mode: Mode, out: &mut ClusterBuf) -> Result<KernelRun, Error> {
        if self.day_count == 0 {
            return Err(Error::EmptyLog);
        }
        out.clear();
        if self.refresh_populated(mode) == 0 {
            return Err(Error::EmptySystem);
        }

        let day_minutes = (KERNEL_BINS as u32 * KERNEL_PERIOD) as u16;
        let period = KERNEL_PERIOD as u16;
        self.control.prev_largest = 1;
        self.control.max_jump = 0;
        self.control.critical_ell = period;
        self.control.ell = period;
        while self.control.ell <= day_minutes {
            self.sweep_pass(None);
            let jump = self.control.largest - self.control.prev_largest.min(self.control.largest);
            if jump > self.control.max_jump || self.control.ell == period {
                self.control.max_jump = jump;
                self.control.critical_ell = self.control.ell;
            }
            self.control.prev_largest = self.control.largest;
            self.control.ell += period;
        }
        self.control.selected_ell = if self.control.critical_ell > period {
            self.control.critical_ell - period
        } else {
            period
        };

        self.control.ell = self.control.selected_ell;
        let fitted = self.sweep_pass(Some(out));

        Ok(KernelRun {
            selected_ell: self.control.selected_ell as u32,
            critical_ell: self.control.critical_ell as u32,
            saturated: self.saturated(),
            rounding_boundary: self.rounding_flagged(),
            truncated: !fitted,
        })
    }
}

impl Default for KernelState {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn state_fits_the_memory_budget() {
        let state = core::mem::size_of::<KernelState>();
        let buf = core::mem::size_of::<ClusterBuf>();
        assert!(state <= 300, "state is {state} bytes");
        assert!(state + buf <= 512, "state+buffer is {} bytes", state + buf);
    }

    #[test]
    fn first_day_is_its_own_mean() {
        let mut state = KernelState::new();
        state.ingest_day(&[601.0, 605.5]).unwrap();
        assert_eq!(state.day_count(), 1);
        assert_eq!(state.bins[60], 16); // 2.0 events scaled by 8
        assert_eq!(state.bin_density(60), 2.0);
    }

    #[test]
    fn second_day_merges_as_running_mean() {
        let mut state = KernelState::new();
        state.ingest_day(&[601.0, 605.5]).unwrap();
        state.ingest_day(&[602.0]).unwrap();
        assert_eq!(state.bins[60], 12); // mean of 2 and 1, scaled
        assert_eq!(state.bin_density(60), 1.5);
    }

    #[test]
    fn rejects_unsorted_or_out_of_range_days() {
        let mut state = KernelState::new();
        assert!(state.ingest_day(&[500.0, 100.0]).is_err());
        assert!(state.ingest_day(&[1440.0]).is_err());
        assert_eq!(state.day_count(), 0);
    }

    #[test]
    fn day_counter_overflow_is_reported() {
        let mut state = KernelState::new();
        state.day_count = u8::MAX;
        assert_eq!(state.ingest_day(&[1.0]), Err(Error::DayCountOverflow));
    }

    #[test]
    fn empty_state_signals_empty_schedule() {
        let mut state = KernelState::new();
        state.ingest_day(&[]).unwrap();
        let mut out = ClusterBuf::new();
        assert_eq!(state.run_tca(Mode::Comfort, &mut out), Err(Error::EmptySystem));
    }

    #[test]
    fn run_before_any_day_is_an_error() {
        let mut state = KernelState::new();
        let mut out = ClusterBuf::new();
        assert_eq!(state.run_tca(Mode::Comfort, &mut out), Err(Error::EmptyLog));
    }

    #[test]
    fn bin_exactly_at_threshold_is_excluded() {
        // uniform density: eco and balance thresholds land exactly on
        // every bin value, and strict inequality drops them all
        let mut state = KernelState::new();
        let uniform: Vec<f64> = (0..KERNEL_BINS).map(|b| b as f64 * 10.0 + 5.0).collect();
        state.ingest_day(&uniform).unwrap();
        let mut out = ClusterBuf::new();
        assert_eq!(state.run_tca(Mode::Eco, &mut out), Err(Error::EmptySystem));
        assert_eq!(state.run_tca(Mode::Balance, &mut out), Err(Error::EmptySystem));
        // comfort keeps them: one full-day cluster
        let run = state.run_tca(Mode::Comfort, &mut out).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.spans()[0], (0, 143));
        assert_eq!(run.critical_ell, 10);
    }

    #[test]
    fn matches_reference_on_a_simple_two_day_log() {
        let days = vec![
            vec![480.0, 492.0, 503.0, 995.0, 1000.5],
            vec![481.5, 505.0, 990.0, 1002.0],
        ];
        let mut state = KernelState::new();
        for day in &days {
            state.ingest_day(day).unwrap();
        }
        let mut out = ClusterBuf::new();
        let run = state.run_tca(Mode::Comfort, &mut out).unwrap();
        assert!(!run.saturated);

        let log = crate::EventLog::new(days).unwrap();
        let reference = crate::tca(&log, KERNEL_PERIOD, Mode::Comfort).unwrap();
        let kernel: Vec<Cluster> = out.iter().collect();
        assert_eq!(kernel, reference);
    }

    #[test]
    fn saturation_clips_and_flags() {
        let mut state = KernelState::new();
        // 40 events in one bin: 8 * 40 = 320 > 255
        let day: Vec<f64> = (0..40).map(|i| 700.0 + i as f64 * 0.1).collect();
        state.ingest_day(&day).unwrap();
        assert!(state.saturated());
        assert_eq!(state.bins[70], 255);
        let mut out = ClusterBuf::new();
        let run = state.run_tca(Mode::Comfort, &mut out).unwrap();
        assert!(run.saturated);
    }

    #[test]
    fn thirty_day_running_mean_tracks_the_exact_mean() {
        // cheap xorshift stream; the oracle is the exact floating mean
        let mut rng_state = 0x9E37_79B9_7F4A_7C15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        let mut state = KernelState::new();
        let mut totals = [0u32; KERNEL_BINS];
        let mut active_days = [0u32; KERNEL_BINS];
        for _ in 0..30u32 {
            let count = 20 + (next() % 60) as usize;
            let mut events: Vec<f64> = (0..count)
                .map(|_| (next() % 14_400) as f64 / 10.0)
                .collect();
            events.sort_by(f64::total_cmp);
            let mut seen = [false; KERNEL_BINS];
            for &t in &events {
                let bin = (t / 10.0) as usize;
                totals[bin] += 1;
                seen[bin] = true;
            }
            for (bin, &s) in seen.iter().enumerate() {
                active_days[bin] += s as u32;
            }
            state.ingest_day(&events).unwrap();
        }
        assert!(!state.saturated());
        for (bin, &total) in totals.iter().enumerate() {
            let exact = total as f64 / 30.0 * DENSITY_SCALE as f64;
            let stored = state.bins[bin] as f64;
            // the decay stall lets a sporadically-fed bin sit several
            // eighths high; steadily-fed bins track the exact mean
            assert!(
                (stored - exact).abs() <= 5.0,
                "bin {bin}: stored {stored} vs exact {exact:.3}"
            );
            if active_days[bin] >= 15 {
                assert!(
                    (stored - exact).abs() <= 1.0,
                    "steady bin {bin}: stored {stored} vs exact {exact:.3}"
                );
            }
        }
    }

    #[test]
    fn cluster_buffer_overflow_merges_into_last() {
        let mut state = KernelState::new();
        // 20 isolated populated bins, 7 bins apart: more than MAX_CLUSTERS
        let day: Vec<f64> = (0..20).map(|i| (i * 70) as f64 + 5.0).collect();
        state.ingest_day(&day).unwrap();
        let mut out = ClusterBuf::new();
        let run = state.run_tca(Mode::Comfort, &mut out).unwrap();
        assert!(run.truncated);
        assert_eq!(out.len(), MAX_CLUSTERS);
        assert_eq!(out.spans()[MAX_CLUSTERS - 1].1, 133);
    }
}
