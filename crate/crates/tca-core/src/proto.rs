use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::event::{EventLog, MINUTES_PER_DAY};

/// Per-bin mean event counts: the averaged daily usage profile.
///
/// `bins[i]` is the mean number of events falling in time bin `i` per day,
/// where bin `i` covers minutes `[i * period, (i + 1) * period)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPrototype {
    period: u32,
    bins: Vec<f64>,
}

impl DensityPrototype {
    /// Wraps an existing bin vector, validating the period and densities.
    pub fn from_bins(period: u32, bins: Vec<f64>) -> Result<Self, Error> {
        let n = validate_period(period)?;
        if bins.len() != n {
            return Err(Error::BinCountMismatch { expected: n, got: bins.len() });
        }
        for &d in &bins {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidDensity { value: d });
            }
        }
        Ok(DensityPrototype { period, bins })
    }

    /// Minutes per bin.
    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Number of bins `N = 1440 / period`.
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Mean density over all bins, zeros included.
    pub fn mean(&self) -> f64 {
        self.bins.iter().sum::<f64>() / self.bins.len() as f64
    }

    /// Population standard deviation over all bins, zeros included.
    pub fn std_dev(&self) -> f64 {
        let mu = self.mean();
        let var = self
            .bins
            .iter()
            .map(|&d| {
                let diff = d - mu;
                diff * diff
            })
            .sum::<f64>()
            / self.bins.len() as f64;
        libm::sqrt(var)
    }
}

fn validate_period(period: u32) -> Result<usize, Error> {
    if period == 0 || !MINUTES_PER_DAY.is_multiple_of(period) {
        return Err(Error::InvalidPeriod { period });
    }
    Ok((MINUTES_PER_DAY / period) as usize)
}

/// Bins an event log into its density prototype.
///
/// An event at minute `t` lands in bin `floor(t / period)`; an event
/// exactly on a bin boundary belongs to the bin it opens. Counts are
/// accumulated as integers and divided once by the day count, so the
/// result does not depend on day order.
pub fn bin_events(log: &EventLog, period: u32) -> Result<DensityPrototype, Error> {
    let n = validate_period(period)?;
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    let mut counts = vec![0u64; n];
    for day in log.days() {
        for &t in day {
            let bin = (t / period as f64) as usize;
            counts[bin] += 1;
        }
    }
    let num_days = log.num_days() as f64;
    let bins = counts.into_iter().map(|c| c as f64 / num_days).collect();
    Ok(DensityPrototype { period, bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn log(days: Vec<Vec<f64>>) -> EventLog {
        EventLog::new(days).unwrap()
    }

    #[test]
    fn single_day_direct_counts() {
        let proto = bin_events(&log(vec![vec![605.0, 607.0, 1130.0]]), 10).unwrap();
        assert_eq!(proto.len(), 144);
        assert_eq!(proto.bins()[60], 2.0);
        assert_eq!(proto.bins()[113], 1.0);
        let occupied: f64 = proto.bins().iter().sum();
        assert_eq!(occupied, 3.0);
    }

    #[test]
    fn two_day_mean() {
        let proto = bin_events(&log(vec![vec![100.0], vec![105.0]]), 10).unwrap();
        assert_eq!(proto.bins()[10], 1.0);
        assert_eq!(proto.bins().iter().filter(|&&d| d > 0.0).count(), 1);
    }

    #[test]
    fn boundary_event_belongs_to_opened_bin() {
        let proto = bin_events(&log(vec![vec![600.0]]), 10).unwrap();
        assert_eq!(proto.bins()[60], 1.0);
        assert_eq!(proto.bins()[59], 0.0);
    }

    #[test]
    fn rejects_bad_period_and_empty_log() {
        assert_eq!(
            bin_events(&log(vec![vec![1.0]]), 7),
            Err(Error::InvalidPeriod { period: 7 })
        );
        assert_eq!(
            bin_events(&log(vec![vec![1.0]]), 0),
            Err(Error::InvalidPeriod { period: 0 })
        );
        assert_eq!(bin_events(&log(vec![]), 10), Err(Error::EmptyLog));
    }

    #[test]
    fn conservation_of_events() {
        let days = vec![
            vec![10.0, 10.5, 999.0],
            vec![],
            vec![0.0, 720.0, 720.0, 1439.9],
        ];
        let l = log(days);
        let total = l.total_events() as f64;
        let proto = bin_events(&l, 10).unwrap();
        let sum: f64 = proto.bins().iter().sum();
        assert!((sum * l.num_days() as f64 - total).abs() < 1e-9);
    }

    #[test]
    fn day_order_does_not_matter() {
        let a = log(vec![vec![5.0, 100.0], vec![700.0], vec![5.0, 5.1]]);
        let b = log(vec![vec![5.0, 5.1], vec![5.0, 100.0], vec![700.0]]);
        assert_eq!(bin_events(&a, 10).unwrap(), bin_events(&b, 10).unwrap());
    }

    #[test]
    fn minute_bins_reaggregate_to_period_bins() {
        let l = log(vec![vec![4.0, 59.9, 60.0, 617.3], vec![60.1, 1439.0]]);
        let fine = bin_events(&l, 1).unwrap();
        let coarse = bin_events(&l, 10).unwrap();
        for (i, &d) in coarse.bins().iter().enumerate() {
            let regrouped: f64 = fine.bins()[i * 10..(i + 1) * 10].iter().sum();
            assert!((regrouped - d).abs() < 1e-12);
        }
    }

    #[test]
    fn from_bins_validates() {
        assert!(DensityPrototype::from_bins(10, vec![0.0; 144]).is_ok());
        assert_eq!(
            DensityPrototype::from_bins(10, vec![0.0; 100]),
            Err(Error::BinCountMismatch { expected: 144, got: 100 })
        );
        let mut bins = vec![0.0; 144];
        bins[3] = -1.0;
        assert_eq!(
            DensityPrototype::from_bins(10, bins),
            Err(Error::InvalidDensity { value: -1.0 })
        );
    }

    #[test]
    fn mean_and_std_dev() {
        let mut bins = vec![0.0; 4];
        bins[2] = 3.0;
        bins[3] = 3.0;
        let proto = DensityPrototype::from_bins(360, bins).unwrap();
        assert_eq!(proto.mean(), 1.5);
        assert!((proto.std_dev() - 1.5).abs() < 1e-12);
    }
}
