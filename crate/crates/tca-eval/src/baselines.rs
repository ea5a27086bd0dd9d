//! Comparison algorithms: 1D K-Means, a 1D Gaussian-mixture EM, and the
//! always-on conventional policy, each mapped onto compressor-on
//! intervals.
//!
//! How a K-Means or EM fit becomes an on-interval is not canonical; the
//! mappings here ([min, max] member span per K-Means cluster, mean +- 2
//! sigma per EM component) are coverage-oriented choices, so baseline
//! energy/error numbers are implementation-dependent.

use crate::error::EvalError;
use crate::schedule::IntervalSchedule;

/// Outcome of a 1D Lloyd fit.
#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub centroids: Vec<f64>,
    /// Per-point centroid index, aligned with the sorted input.
    pub assignments: Vec<usize>,
    pub wcss: f64,
    /// Within-cluster sum of squares after each iteration.
    pub wcss_history: Vec<f64>,
    pub iterations: usize,
    /// Actual cluster count; less than requested when the input has
    /// fewer distinct values.
    pub effective_k: usize,
    pub reduced_k: bool,
    pub schedule: IntervalSchedule,
}

/// Lloyd's iteration on sorted 1D points with deterministic quantile
/// initialization. Shared by the public K-Means fit and the EM
/// initializer.
fn lloyd(points: &[f64], k: usize) -> (Vec<f64>, Vec<usize>, Vec<f64>, usize) {
    let n = points.len();
    let mut centroids: Vec<f64> = (0..k)
        .map(|j| {
            let idx = ((j as f64 + 0.5) / k as f64 * n as f64) as usize;
            points[idx.min(n - 1)]
        })
        .collect();
    let mut assignments = vec![0usize; n];
    let mut iterations = 0;
    let mut wcss_history = Vec::new();

    for _ in 0..100 {
        iterations += 1;
        let mut changed = false;
        for (i, &x) in points.iter().enumerate() {
            let mut best = 0usize;
            let mut best_dist = f64::INFINITY;
            for (j, &c) in centroids.iter().enumerate() {
                let dist = (x - c).abs();
                if dist < best_dist {
                    best_dist = dist;
                    best = j;
                }
            }
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }

        // reseed empty clusters at the point farthest from its centroid
        let mut counts = vec![0usize; k];
        for &a in &assignments {
            counts[a] += 1;
        }
        for j in 0..k {
            if counts[j] == 0 {
                let (far, _) = points
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (i, (x - centroids[assignments[i]]).abs()))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("non-empty points");
                counts[assignments[far]] -= 1;
                assignments[far] = j;
                counts[j] = 1;
                changed = true;
            }
        }

        let mut sums = vec![0.0f64; k];
        let mut sizes = vec![0usize; k];
        for (i, &x) in points.iter().enumerate() {
            sums[assignments[i]] += x;
            sizes[assignments[i]] += 1;
        }
        for j in 0..k {
            if sizes[j] > 0 {
                centroids[j] = sums[j] / sizes[j] as f64;
            }
        }

        let wcss: f64 = points
            .iter()
            .zip(&assignments)
            .map(|(&x, &a)| {
                let d = x - centroids[a];
                d * d
            })
            .sum();
        wcss_history.push(wcss);

        if !changed {
            break;
        }
    }

    (centroids, assignments, wcss_history, iterations)
}

/// 1D K-Means over pooled event minutes.
///
/// Each cluster maps to the `[min member, max member]` span; zero-width
/// spans are widened to `min_width` minutes so a non-empty cluster always
/// costs some energy. When there are fewer distinct values than `k`, the
/// fit runs with the distinct count and flags the reduction.
pub fn kmeans_1d(points: &[f64], k: usize, min_width: f64) -> Result<KMeansFit, EvalError> {
    if points.is_empty() {
        return Err(EvalError::EmptyPoints);
    }
    if k == 0 {
        return Err(EvalError::InvalidConfig("k must be at least 1".into()));
    }
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = 1usize;
    for pair in sorted.windows(2) {
        if pair[1] > pair[0] {
            distinct += 1;
        }
    }
    let effective_k = k.min(distinct);
    let (centroids, assignments, wcss_history, iterations) = lloyd(&sorted, effective_k);
    let wcss = *wcss_history.last().expect("at least one iteration");

    let mut spans = vec![(f64::INFINITY, f64::NEG_INFINITY); effective_k];
    for (i, &a) in assignments.iter().enumerate() {
        spans[a].0 = spans[a].0.min(sorted[i]);
        spans[a].1 = spans[a].1.max(sorted[i]);
    }
    let raw = spans
        .into_iter()
        .filter(|&(lo, _)| lo.is_finite())
        .map(|(lo, hi)| if hi > lo { (lo, hi) } else { (lo, lo + min_width) })
        .collect();

    Ok(KMeansFit {
        centroids,
        assignments,
        wcss,
        wcss_history,
        iterations,
        effective_k,
        reduced_k: effective_k < k,
        schedule: IntervalSchedule::from_raw(raw),
    })
}

/// One Gaussian component of a 1D mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmmComponent {
    pub weight: f64,
    pub mean: f64,
    pub std_dev: f64,
}

/// Fitted mixture parameters.
#[derive(Debug, Clone)]
pub struct GmmParams {
    pub components: Vec<GmmComponent>,
    pub log_likelihood: f64,
    /// Log-likelihood after each E step, first iteration onward.
    pub ll_history: Vec<f64>,
    pub iterations: usize,
}

const VARIANCE_FLOOR: f64 = 1.0; // minutes^2
const LL_TOLERANCE: f64 = 1e-6;
const MAX_EM_ITERATIONS: usize = 200;
const LN_2PI: f64 = 1.8378770664093453;

/// Expectation-maximization for a 1D Gaussian mixture over pooled event
/// minutes, initialized from the K-Means fit.
///
/// Iterates until the log-likelihood gain drops below `1e-6` or 200
/// rounds. Variances are floored at one square minute, which keeps the
/// likelihood finite on degenerate inputs. Each component maps to the
/// interval `[mean - 2 sigma, mean + 2 sigma]`, clipped to the day.
pub fn em_gmm_1d(points: &[f64], k: usize) -> Result<(GmmParams, IntervalSchedule), EvalError> {
    if points.len() < 2 * k {
        return Err(EvalError::TooFewPoints { needed: 2 * k, got: points.len() });
    }
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let effective_k = k.min(sorted.windows(2).filter(|w| w[1] > w[0]).count() + 1);
    let (centroids, assignments, _, _) = lloyd(&sorted, effective_k);
    let mut ll_history = Vec::new();

    let mut components: Vec<GmmComponent> = (0..effective_k)
        .map(|j| {
            let members: Vec<f64> = sorted
                .iter()
                .zip(&assignments)
                .filter(|(_, &a)| a == j)
                .map(|(&x, _)| x)
                .collect();
            let weight = members.len() as f64 / n as f64;
            let mean = centroids[j];
            let var = members.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                / members.len() as f64;
            GmmComponent { weight, mean, std_dev: var.max(VARIANCE_FLOOR).sqrt() }
        })
        .collect();

    let mut resp = vec![0.0f64; n * effective_k];
    let mut log_likelihood = f64::NEG_INFINITY;
    let mut iterations = 0;

    for _ in 0..MAX_EM_ITERATIONS {
        iterations += 1;

        // E step, via log-sum-exp per point
        let mut ll = 0.0;
        for (i, &x) in sorted.iter().enumerate() {
            let row = &mut resp[i * effective_k..(i + 1) * effective_k];
            let mut max_term = f64::NEG_INFINITY;
            for (j, c) in components.iter().enumerate() {
                let z = (x - c.mean) / c.std_dev;
                row[j] = c.weight.ln() - 0.5 * z * z - c.std_dev.ln() - 0.5 * LN_2PI;
                max_term = max_term.max(row[j]);
            }
            let mut total = 0.0;
            for term in row.iter_mut() {
                *term = (*term - max_term).exp();
                total += *term;
            }
            for term in row.iter_mut() {
                *term /= total;
            }
            ll += max_term + total.ln();
        }
        if !ll.is_finite() {
            return Err(EvalError::NonFiniteLikelihood);
        }
        ll_history.push(ll);

        let gain = ll - log_likelihood;
        log_likelihood = ll;
        if gain.abs() < LL_TOLERANCE && iterations > 1 {
            break;
        }

        // M step
        for j in 0..effective_k {
            let nj: f64 = (0..n).map(|i| resp[i * effective_k + j]).sum();
            let mean: f64 =
                (0..n).map(|i| resp[i * effective_k + j] * sorted[i]).sum::<f64>() / nj;
            let var: f64 = (0..n)
                .map(|i| {
                    let d = sorted[i] - mean;
                    resp[i * effective_k + j] * d * d
                })
                .sum::<f64>()
                / nj;
            components[j] = GmmComponent {
                weight: nj / n as f64,
                mean,
                std_dev: var.max(VARIANCE_FLOOR).sqrt(),
            };
        }
    }

    let raw = components
        .iter()
        .map(|c| (c.mean - 2.0 * c.std_dev, c.mean + 2.0 * c.std_dev))
        .collect();
    let schedule = IntervalSchedule::from_raw(raw);
    Ok((GmmParams { components, log_likelihood, ll_history, iterations }, schedule))
}

/// The standard always-on policy: chilled water around the clock.
pub fn conventional() -> IntervalSchedule {
    IntervalSchedule::full_day()
}
