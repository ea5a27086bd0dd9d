use alloc::vec::Vec;

use crate::cluster::{agglomerate, populated_indexes, Cluster, ThresholdParams};
use crate::error::Error;
use crate::event::{EventLog, MINUTES_PER_DAY};
use crate::proto::{bin_events, DensityPrototype};
use crate::threshold::{select_threshold, Mode};

/// One step of the time-threshold sweep.
///
/// Cluster sizes are masses: the number of populated bins in the cluster,
/// not its span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercolationStep {
    pub ell: u32,
    pub largest: usize,
    pub second_largest: usize,
    pub cluster_count: usize,
}

/// Record of the full sweep and the two thresholds it picks out.
///
/// `critical_ell` is where the largest cluster grows the most in one step
/// (the phase transition, where it swallows the runner-up); `selected_ell`
/// is the step just before it, floored at one period.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationTrace {
    pub steps: Vec<PercolationStep>,
    pub critical_ell: u32,
    pub selected_ell: u32,
}

/// Sweeps `ell` from one period up to a full day, one period at a time,
/// and locates the percolation transition.
///
/// The jump at each step is measured against the previous step's largest
/// cluster; the ell = 0 baseline is the fully fragmented state where every
/// populated bin is its own cluster (largest size 1). Ties go to the
/// earliest step.
///
/// Errors with [`Error::EmptySystem`] when no bin exceeds `d_star`.
pub fn percolation_sweep(
    proto: &DensityPrototype,
    d_star: f64,
) -> Result<PercolationTrace, Error> {
    percolation_sweep_instrumented(proto, d_star).map(|(trace, _)| trace)
}

/// Same as [`percolation_sweep`], also reporting total bin visits.
pub fn percolation_sweep_instrumented(
    proto: &DensityPrototype,
    d_star: f64,
) -> Result<(PercolationTrace, u64), Error> {
    if !d_star.is_finite() || d_star < 0.0 {
        return Err(Error::InvalidDensityThreshold { d_star });
    }
    let period = proto.period();
    let mut visits = 0u64;
    let populated = populated_indexes(proto, d_star, &mut visits);
    if populated.is_empty() {
        return Err(Error::EmptySystem);
    }

    let mut steps = Vec::with_capacity((MINUTES_PER_DAY / period) as usize);
    let mut prev_largest = 1usize;
    let mut max_jump = 0isize;
    let mut critical_ell = period;
    let mut ell = period;
    while ell <= MINUTES_PER_DAY {
        let max_gap = (ell / period) as usize;
        let clusters = agglomerate(&populated, max_gap, &mut visits);
        let mut largest = 0usize;
        let mut second = 0usize;
        for &(_, mass) in &clusters {
            if mass > largest {
                second = largest;
                largest = mass;
            } else if mass > second {
                second = mass;
            }
        }
        let jump = largest as isize - prev_largest as isize;
        if jump > max_jump || steps.is_empty() {
            max_jump = jump;
            critical_ell = ell;
        }
        steps.push(PercolationStep {
            ell,
            largest,
            second_largest: second,
            cluster_count: clusters.len(),
        });
        prev_largest = largest;
        ell += period;
    }

    let selected_ell = if critical_ell > period { critical_ell - period } else { period };
    Ok((PercolationTrace { steps, critical_ell, selected_ell }, visits))
}

/// Full pipeline result: the chosen density threshold, the sweep trace,
/// and the clusters at the selected time threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct TcaResult {
    pub d_star: f64,
    pub trace: PercolationTrace,
    pub clusters: Vec<Cluster>,
}

/// End-to-end temporal clustering: bin the log, pick `D*` from the mode,
/// sweep `ell` to the percolation transition, and return the clusters at
/// the step just before it.
pub fn tca(log: &EventLog, period: u32, mode: Mode) -> Result<Vec<Cluster>, Error> {
    tca_detailed(log, period, mode).map(|r| r.clusters)
}

/// [`tca`] with the intermediate trace and threshold exposed.
pub fn tca_detailed(log: &EventLog, period: u32, mode: Mode) -> Result<TcaResult, Error> {
    let proto = bin_events(log, period)?;
    let d_star = select_threshold(mode, &proto);
    run_at_threshold(&proto, d_star)
}

/// End-to-end clustering with an explicit density threshold instead of a
/// mode; used by threshold sweeps.
pub fn tca_with_threshold(
    log: &EventLog,
    period: u32,
    d_star: f64,
) -> Result<TcaResult, Error> {
    let proto = bin_events(log, period)?;
    run_at_threshold(&proto, d_star)
}

fn run_at_threshold(proto: &DensityPrototype, d_star: f64) -> Result<TcaResult, Error> {
    let trace = percolation_sweep(proto, d_star)?;
    let params = ThresholdParams { ell: trace.selected_ell, d_star };
    let clusters = crate::cluster::cluster_fixed(proto, &params)?;
    Ok(TcaResult { d_star, trace, clusters })
}
