use alloc::vec::Vec;

use crate::error::Error;
use crate::proto::DensityPrototype;

/// A contiguous run of agglomerated bins, `start_bin..=end_bin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cluster {
    pub start_bin: usize,
    pub end_bin: usize,
}

impl Cluster {
    /// Number of bins spanned, holes included.
    pub fn span_bins(&self) -> usize {
        self.end_bin - self.start_bin + 1
    }

    /// First covered minute.
    pub fn start_minute(&self, period: u32) -> u32 {
        self.start_bin as u32 * period
    }

    /// One past the last covered minute (half-open span).
    pub fn end_minute(&self, period: u32) -> u32 {
        (self.end_bin as u32 + 1) * period
    }
}

/// The two clustering thresholds: time reach `ell` (minutes) and density
/// floor `d_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    /// Maximum gap, in minutes, between populated bins chained into one
    /// cluster. Must be a positive multiple of the prototype period.
    pub ell: u32,
    /// A bin participates only if its density strictly exceeds this.
    pub d_star: f64,
}

impl ThresholdParams {
    pub fn validate(&self, period: u32) -> Result<(), Error> {
        if self.ell < period || !self.ell.is_multiple_of(period) {
            return Err(Error::InvalidThreshold { ell: self.ell, period });
        }
        if !self.d_star.is_finite() || self.d_star < 0.0 {
            return Err(Error::InvalidDensityThreshold { d_star: self.d_star });
        }
        Ok(())
    }
}

/// Indexes of bins with density strictly above `d_star`, ascending.
///
/// `visits` counts bin reads for the complexity checks.
pub(crate) fn populated_indexes(
    proto: &DensityPrototype,
    d_star: f64,
    visits: &mut u64,
) -> Vec<usize> {
    let mut populated = Vec::new();
    for (i, &d) in proto.bins().iter().enumerate() {
        *visits += 1;
        if d > d_star {
            populated.push(i);
        }
    }
    populated
}

/// Chains sorted populated indexes into clusters, returning each cluster
/// with its mass (number of populated member bins).
///
/// Two consecutive populated bins belong to the same cluster iff their
/// index gap is at most `max_gap_bins`. One pass, left to right: a cluster
/// absorbs the next populated bin while it lies within reach of the last
/// absorbed one, and closes otherwise.
pub(crate) fn agglomerate(
    populated: &[usize],
    max_gap_bins: usize,
    visits: &mut u64,
) -> Vec<(Cluster, usize)> {
    let mut clusters = Vec::new();
    let mut iter = populated.iter();
    let first = match iter.next() {
        Some(&i) => i,
        None => return clusters,
    };
    *visits += 1;
    let mut start = first;
    let mut last = first;
    let mut mass = 1usize;
    for &i in iter {
        *visits += 1;
        if i - last <= max_gap_bins {
            last = i;
            mass += 1;
        } else {
            clusters.push((Cluster { start_bin: start, end_bin: last }, mass));
            start = i;
            last = i;
            mass = 1;
        }
    }
    clusters.push((Cluster { start_bin: start, end_bin: last }, mass));
    clusters
}

/// Clusters the prototype at a fixed `(ell, d_star)`.
///
/// Returns a possibly-empty, sorted, disjoint cluster list; every
/// populated bin belongs to exactly one cluster.
pub fn cluster_fixed(
    proto: &DensityPrototype,
    params: &ThresholdParams,
) -> Result<Vec<Cluster>, Error> {
    cluster_fixed_instrumented(proto, params).map(|(clusters, _)| clusters)
}

/// Same as [`cluster_fixed`], also reporting how many bin visits the run
/// took. Used to pin the linear-time behavior in tests.
pub fn cluster_fixed_instrumented(
    proto: &DensityPrototype,
    params: &ThresholdParams,
) -> Result<(Vec<Cluster>, u64), Error> {
    params.validate(proto.period())?;
    let mut visits = 0u64;
    let populated = populated_indexes(proto, params.d_star, &mut visits);
    let max_gap = (params.ell / proto.period()) as usize;
    let clusters = agglomerate(&populated, max_gap, &mut visits)
        .into_iter()
        .map(|(c, _)| c)
        .collect();
    Ok((clusters, visits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn proto_with_populated(n: usize, populated: &[usize]) -> DensityPrototype {
        let mut bins = vec![0.0; n];
        for &i in populated {
            bins[i] = 1.0;
        }
        DensityPrototype::from_bins(1440 / n as u32, bins).unwrap()
    }

    #[test]
    fn single_populated_bin_is_its_own_cluster() {
        let proto = proto_with_populated(144, &[10]);
        for ell in [10, 50, 1440] {
            let clusters =
                cluster_fixed(&proto, &ThresholdParams { ell, d_star: 0.0 }).unwrap();
            assert_eq!(clusters, vec![Cluster { start_bin: 10, end_bin: 10 }]);
        }
    }

    #[test]
    fn gap_at_reach_joins_and_beyond_reach_splits() {
        let proto = proto_with_populated(144, &[10, 12, 30]);
        let clusters =
            cluster_fixed(&proto, &ThresholdParams { ell: 20, d_star: 0.0 }).unwrap();
        assert_eq!(
            clusters,
            vec![
                Cluster { start_bin: 10, end_bin: 12 },
                Cluster { start_bin: 30, end_bin: 30 },
            ]
        );
    }

    #[test]
    fn strict_density_inequality() {
        let mut bins = vec![0.0; 144];
        bins[5] = 1.0;
        bins[6] = 1.5;
        let proto = DensityPrototype::from_bins(10, bins).unwrap();
        let clusters =
            cluster_fixed(&proto, &ThresholdParams { ell: 10, d_star: 1.0 }).unwrap();
        assert_eq!(clusters, vec![Cluster { start_bin: 6, end_bin: 6 }]);
    }

    #[test]
    fn no_populated_bins_yields_empty_list() {
        let proto = proto_with_populated(144, &[]);
        let clusters =
            cluster_fixed(&proto, &ThresholdParams { ell: 10, d_star: 0.0 }).unwrap();
        assert!(clusters.is_empty());
    }

    #[test]
    fn rejects_invalid_params() {
        let proto = proto_with_populated(144, &[3]);
        assert_eq!(
            cluster_fixed(&proto, &ThresholdParams { ell: 15, d_star: 0.0 }),
            Err(Error::InvalidThreshold { ell: 15, period: 10 })
        );
        assert_eq!(
            cluster_fixed(&proto, &ThresholdParams { ell: 0, d_star: 0.0 }),
            Err(Error::InvalidThreshold { ell: 0, period: 10 })
        );
        assert_eq!(
            cluster_fixed(&proto, &ThresholdParams { ell: 10, d_star: -0.1 }),
            Err(Error::InvalidDensityThreshold { d_star: -0.1 })
        );
    }

    #[test]
    fn visits_stay_linear_in_bins() {
        let proto = proto_with_populated(144, &(0..144).collect::<Vec<_>>());
        let (_, visits) =
            cluster_fixed_instrumented(&proto, &ThresholdParams { ell: 10, d_star: 0.0 })
                .unwrap();
        assert!(visits <= 3 * 144);
    }

    #[test]
    fn minute_conversion_is_half_open() {
        let c = Cluster { start_bin: 60, end_bin: 61 };
        assert_eq!(c.start_minute(10), 600);
        assert_eq!(c.end_minute(10), 620);
        assert_eq!(c.span_bins(), 2);
    }
}
