//! Evaluation engine: per-fold error and energy, leave-one-out style
//! cross-validation over training pairs, density-threshold sweeps, and
//! memory accounting.

use serde::Serialize;
use tca_core::kernel::{ClusterBuf, KernelState, KERNEL_PERIOD};
use tca_core::{bin_events, tca_detailed, tca_with_threshold, Day, EventLog, Mode};

use crate::baselines::{conventional, em_gmm_1d, kmeans_1d};
use crate::error::EvalError;
use crate::schedule::IntervalSchedule;

/// Energy drawn per hour of compressor-on time.
///
/// The default rate makes the always-on policy cost 14.64 units per day;
/// cross-algorithm comparisons are reported as ratios, which do not
/// depend on it.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerModel {
    pub rate: f64,
    pub unit_label: String,
}

/// Default energy rate per compressor-on hour.
pub const DEFAULT_POWER_RATE: f64 = 0.61;

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel { rate: DEFAULT_POWER_RATE, unit_label: "Wh".into() }
    }
}

impl PowerModel {
    pub fn new(rate: f64) -> Result<Self, EvalError> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(EvalError::InvalidConfig(format!("power rate {rate} must be > 0")));
        }
        Ok(PowerModel { rate, unit_label: "Wh".into() })
    }
}

/// Which implementation of the clustering pipeline fits the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Reference,
    Kernel,
}

/// A schedule-producing algorithm under benchmark.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Tca { mode: Mode, engine: Engine },
    /// Clustering with an explicit density threshold; used by sweeps.
    TcaFixed { d_star: f64 },
    KMeans { k: usize },
    Em { k: usize },
    Conventional,
}

/// Control bytes granted on top of the per-minute vectors in the
/// worst-case memory estimate for the pooled-input baselines.
const BASELINE_CONTROL_BYTES: usize = 20;
/// Worst-case baseline footprint: two 1440-entry vectors (one event per
/// minute) plus control variables.
pub const BASELINE_MEMORY_BYTES: usize = 2 * 1440 + BASELINE_CONTROL_BYTES;

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Tca { mode, engine: Engine::Reference } => format!("tca-{mode}"),
            Algorithm::Tca { mode, engine: Engine::Kernel } => {
                format!("tca-kernel-{mode}")
            }
            Algorithm::TcaFixed { d_star } => format!("tca-dstar-{d_star:.4}"),
            Algorithm::KMeans { .. } => "kmeans".into(),
            Algorithm::Em { .. } => "em".into(),
            Algorithm::Conventional => "conventional".into(),
        }
    }

    /// Working-memory estimate in bytes; `None` marks "not applicable"
    /// (the always-on policy needs no learned state).
    pub fn memory_bytes(&self) -> Option<usize> {
        match self {
            Algorithm::Tca { .. } | Algorithm::TcaFixed { .. } => {
                Some(core::mem::size_of::<KernelState>())
            }
            Algorithm::KMeans { .. } | Algorithm::Em { .. } => Some(BASELINE_MEMORY_BYTES),
            Algorithm::Conventional => None,
        }
    }

    /// Fits a compressor schedule on the given training days.
    ///
    /// Clustering algorithms that end up with no populated bins yield an
    /// empty schedule (never on), which evaluation scores as full error
    /// on any non-empty test day.
    pub fn fit(&self, train: &[&Day], period: u32) -> Result<IntervalSchedule, EvalError> {
        match self {
            Algorithm::Tca { mode, engine: Engine::Reference } => {
                let log = EventLog::new(train.iter().map(|d| (*d).clone()).collect())?;
                match tca_detailed(&log, period, *mode) {
                    Ok(result) => Ok(IntervalSchedule::from_clusters(&result.clusters, period)),
                    Err(tca_core::Error::EmptySystem) => Ok(IntervalSchedule::empty()),
                    Err(e) => Err(e.into()),
                }
            }
            Algorithm::Tca { mode, engine: Engine::Kernel } => {
                if period != KERNEL_PERIOD {
                    return Err(EvalError::InvalidConfig(format!(
                        "kernel engine supports period {KERNEL_PERIOD} only, got {period}"
                    )));
                }
                let mut state = KernelState::new();
                for day in train {
                    state.ingest_day(day)?;
                }
                let mut out = ClusterBuf::new();
                match state.run_tca(*mode, &mut out) {
                    Ok(_) => {
                        let clusters: Vec<_> = out.iter().collect();
                        Ok(IntervalSchedule::from_clusters(&clusters, period))
                    }
                    Err(tca_core::Error::EmptySystem) => Ok(IntervalSchedule::empty()),
                    Err(e) => Err(e.into()),
                }
            }
            Algorithm::TcaFixed { d_star } => {
                let log = EventLog::new(train.iter().map(|d| (*d).clone()).collect())?;
                match tca_with_threshold(&log, period, *d_star) {
                    Ok(result) => Ok(IntervalSchedule::from_clusters(&result.clusters, period)),
                    Err(tca_core::Error::EmptySystem) => Ok(IntervalSchedule::empty()),
                    Err(e) => Err(e.into()),
                }
            }
            Algorithm::KMeans { k } => {
                let points = pool(train);
                Ok(kmeans_1d(&points, *k, period as f64)?.schedule)
            }
            Algorithm::Em { k } => {
                let points = pool(train);
                Ok(em_gmm_1d(&points, *k)?.1)
            }
            Algorithm::Conventional => Ok(conventional()),
        }
    }
}

fn pool(train: &[&Day]) -> Vec<f64> {
    let mut points: Vec<f64> = train.iter().flat_map(|d| d.iter().copied()).collect();
    points.sort_by(f64::total_cmp);
    points
}

/// Outcome of scoring one schedule against one test day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Fraction of test events not covered by any interval.
    pub error_rate: f64,
    pub on_hours: f64,
    pub energy: f64,
    /// The test day had no events; the error defaults to zero.
    pub empty_test_day: bool,
}

/// Scores a schedule on a test day: the error rate is the fraction of
/// events outside every on-interval, and energy is rate times on-hours.
pub fn evaluate(schedule: &IntervalSchedule, test_day: &Day, power: &PowerModel) -> Evaluation {
    let on_hours = schedule.on_hours();
    let energy = power.rate * on_hours;
    if test_day.is_empty() {
        return Evaluation { error_rate: 0.0, on_hours, energy, empty_test_day: true };
    }
    let missed = test_day.iter().filter(|&&t| !schedule.covers(t)).count();
    Evaluation {
        error_rate: missed as f64 / test_day.len() as f64,
        on_hours,
        energy,
        empty_test_day: false,
    }
}

/// One cross-validation fold: fit on two days, score on a third.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub algorithm: String,
    pub dataset: String,
    pub train_days: (usize, usize),
    pub test_day: usize,
    pub error_rate: f64,
    pub on_hours: f64,
    pub energy: f64,
    pub memory_bytes: Option<usize>,
    /// Error of the schedule on its own pooled training events.
    pub training_error: f64,
    pub empty_test_day: bool,
}

/// All folds for one algorithm on one dataset, with their means.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub reports: Vec<EvalReport>,
    pub mean_error: f64,
    pub mean_energy: f64,
    pub mean_on_hours: f64,
    pub mean_training_error: f64,
}

/// Fold layout: every unordered pair of training days crossed with every
/// remaining test day, in (i, j, k) order.
pub fn fold_indexes(num_days: usize) -> Vec<(usize, usize, usize)> {
    let mut folds = Vec::new();
    for i in 0..num_days {
        for j in (i + 1)..num_days {
            for k in 0..num_days {
                if k != i && k != j {
                    folds.push((i, j, k));
                }
            }
        }
    }
    folds
}

/// Options shared by cross-validation runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub period: u32,
    /// Extra pre-cooling minutes before each interval; off by default.
    pub lead_time: f64,
}

impl Default for CvOptions {
    fn default() -> Self {
        CvOptions { period: 10, lead_time: 0.0 }
    }
}

/// Fits and scores the algorithm over every train-pair/test-day fold.
pub fn cross_validate(
    log: &EventLog,
    dataset: &str,
    algorithm: &Algorithm,
    power: &PowerModel,
    options: CvOptions,
) -> Result<CrossValidation, EvalError> {
    let days = log.days();
    if days.len() < 3 {
        return Err(EvalError::InsufficientDays { got: days.len() });
    }
    let memory_bytes = algorithm.memory_bytes();
    let name = algorithm.name();
    let mut reports = Vec::new();
    for (i, j, k) in fold_indexes(days.len()) {
        let schedule =
            algorithm.fit(&[&days[i], &days[j]], options.period)?.with_lead_time(options.lead_time);
        let scored = evaluate(&schedule, &days[k], power);
        let mut train_events: Day = Vec::with_capacity(days[i].len() + days[j].len());
        train_events.extend_from_slice(&days[i]);
        train_events.extend_from_slice(&days[j]);
        let train_scored = evaluate(&schedule, &train_events, power);
        reports.push(EvalReport {
            algorithm: name.clone(),
            dataset: dataset.to_string(),
            train_days: (i, j),
            test_day: k,
            error_rate: scored.error_rate,
            on_hours: scored.on_hours,
            energy: scored.energy,
            memory_bytes,
            training_error: train_scored.error_rate,
            empty_test_day: scored.empty_test_day,
        });
    }
    let n = reports.len() as f64;
    Ok(CrossValidation {
        mean_error: reports.iter().map(|r| r.error_rate).sum::<f64>() / n,
        mean_energy: reports.iter().map(|r| r.energy).sum::<f64>() / n,
        mean_on_hours: reports.iter().map(|r| r.on_hours).sum::<f64>() / n,
        mean_training_error: reports.iter().map(|r| r.training_error).sum::<f64>() / n,
        reports,
    })
}

/// One point of the density-threshold sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub d_star: f64,
    pub mean_error: f64,
    pub mean_energy: f64,
    pub mean_on_hours: f64,
    pub mean_training_error: f64,
}

/// The three mode thresholds of a prototype, for annotating sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeThresholds {
    pub comfort: f64,
    pub balance: f64,
    pub eco: f64,
}

/// A swept error/energy curve with its mode positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
    pub modes: ModeThresholds,
}

/// Sweeps the density threshold from 0 to the prototype mean in `steps`
/// equal increments (`steps + 1` points, both ends included), running the
/// full cross-validation at each value.
pub fn dstar_sweep(
    log: &EventLog,
    period: u32,
    power: &PowerModel,
    steps: usize,
) -> Result<SweepCurve, EvalError> {
    if steps == 0 {
        return Err(EvalError::InvalidConfig("sweep needs at least one step".into()));
    }
    let proto = bin_events(log, period)?;
    let mu = proto.mean();
    let sigma = proto.std_dev();
    let modes = ModeThresholds {
        comfort: 0.0,
        balance: (mu - sigma / 2.0).max(0.0),
        eco: mu,
    };
    let mut points = Vec::with_capacity(steps + 1);
    for s in 0..=steps {
        let d_star = mu * s as f64 / steps as f64;
        let cv = cross_validate(
            log,
            "sweep",
            &Algorithm::TcaFixed { d_star },
            power,
            CvOptions { period, ..CvOptions::default() },
        )?;
        points.push(SweepPoint {
            d_star,
            mean_error: cv.mean_error,
            mean_energy: cv.mean_energy,
            mean_on_hours: cv.mean_on_hours,
            mean_training_error: cv.mean_training_error,
        });
    }
    Ok(SweepCurve { points, modes })
}
