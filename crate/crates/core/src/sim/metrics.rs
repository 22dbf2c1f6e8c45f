use crate::routing::SearchCounters;

/// Measurements of one simulated day.
///
/// Utilization, active connections, capacity and fragments are sampled at
/// the end of the day. The other values are averages over the day's
/// arrivals and are `None` when there was nothing to average.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyMetrics {
    pub utilization: f64,
    pub arrivals: u64,
    pub established: u64,
    pub p_establish: Option<f64>,
    pub active_connections: usize,
    /// Sum of the slice demands of the active connections.
    pub capacity_served: u64,
    pub mean_connection_length: Option<f64>,
    pub mean_connection_slices: Option<f64>,
    pub mean_edge_fragments: f64,
    pub mean_search_seconds: Option<f64>,
    /// Operation counts summed over the day's searches.
    pub counters: SearchCounters,
}

impl DailyMetrics {
    /// Mean operation counts per search, `None` on a day without searches.
    pub fn counters_per_search(&self) -> Option<[f64; 5]> {
        if self.arrivals == 0 {
            return None;
        }
        let n = self.arrivals as f64;
        let c = &self.counters;
        Some([
            c.relaxations as f64 / n,
            c.labels_created as f64 / n,
            c.labels_purged as f64 / n,
            c.queue_pops as f64 / n,
            c.candidates_probed as f64 / n,
        ])
    }
}

macro_rules! metric_set {
    ($($(#[$doc:meta])* $field:ident),* $(,)?) => {
        /// One value per reported metric.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct Metrics {
            $($(#[$doc])* pub $field: f64,)*
        }

        impl Metrics {
            pub const NAMES: &'static [&'static str] = &[$(stringify!($field)),*];

            pub fn values(&self) -> Vec<f64> {
                vec![$(self.$field),*]
            }

            pub fn from_fn(f: impl FnMut(usize) -> f64) -> Metrics {
                let mut values = (0..Self::NAMES.len()).map(f);
                Metrics {
                    $($field: values.next().expect("one value per field"),)*
                }
            }
        }
    };
}

metric_set! {
    utilization,
    p_establish,
    active_connections,
    capacity_served,
    /// km
    connection_length,
    connection_slices,
    edge_fragments,
    /// Wall-clock seconds per search, NaN unless timing was enabled.
    search_seconds,
    relaxations,
    labels_created,
    labels_purged,
    queue_pops,
    candidates_probed,
}

impl Metrics {
    pub const SEARCH_SECONDS: usize = 7;
}

/// Daily metrics of one run and their averages.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResults {
    pub days: Vec<DailyMetrics>,
    /// Averages over the days; a metric undefined on some day is averaged
    /// over the days where it is defined and is NaN if it never is.
    pub summary: Metrics,
    pub arrivals: u64,
    pub established: u64,
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> f64 {
    let (sum, count) = values
        .flatten()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

impl RunResults {
    pub fn from_days(days: Vec<DailyMetrics>, pooled_p_establish: bool) -> RunResults {
        let arrivals: u64 = days.iter().map(|d| d.arrivals).sum();
        let established: u64 = days.iter().map(|d| d.established).sum();
        let per_search: Vec<Option<[f64; 5]>> =
            days.iter().map(DailyMetrics::counters_per_search).collect();
        let op = |i: usize| mean_defined(per_search.iter().map(|c| c.map(|c| c[i])));
        let p_establish = if pooled_p_establish {
            if arrivals == 0 {
                f64::NAN
            } else {
                established as f64 / arrivals as f64
            }
        } else {
            mean_defined(days.iter().map(|d| d.p_establish))
        };
        let summary = Metrics {
            utilization: mean_defined(days.iter().map(|d| Some(d.utilization))),
            p_establish,
            active_connections: mean_defined(
                days.iter().map(|d| Some(d.active_connections as f64)),
            ),
            capacity_served: mean_defined(days.iter().map(|d| Some(d.capacity_served as f64))),
            connection_length: mean_defined(days.iter().map(|d| d.mean_connection_length)),
            connection_slices: mean_defined(days.iter().map(|d| d.mean_connection_slices)),
            edge_fragments: mean_defined(days.iter().map(|d| Some(d.mean_edge_fragments))),
            search_seconds: mean_defined(days.iter().map(|d| d.mean_search_seconds)),
            relaxations: op(0),
            labels_created: op(1),
            labels_purged: op(2),
            queue_pops: op(3),
            candidates_probed: op(4),
        };
        RunResults {
            days,
            summary,
            arrivals,
            established,
        }
    }
}

/// Sample statistics of a population of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationResults {
    pub samples: usize,
    /// Sample means; search time is the sample minimum instead.
    pub mean: Metrics,
    /// Relative standard error of each sample mean, NaN with fewer than two
    /// samples.
    pub rse: Metrics,
}

/// Relative standard error `s / sqrt(n) / |mean|` with the n-1 sample
/// deviation. Zero spread gives zero; NaN values are ignored.
pub fn relative_standard_error(values: &[f64]) -> f64 {
    let finite: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    let n = finite.len();
    if n < 2 {
        return f64::NAN;
    }
    let mean = finite.iter().sum::<f64>() / n as f64;
    let var = finite.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return 0.0;
    }
    var.sqrt() / (n as f64).sqrt() / mean.abs()
}

/// Combines the runs of one population.
pub fn aggregate(samples: &[Metrics]) -> PopulationResults {
    assert!(
        !samples.is_empty(),
        "a population needs at least one sample"
    );
    let columns: Vec<Vec<f64>> = (0..Metrics::NAMES.len())
        .map(|i| samples.iter().map(|m| m.values()[i]).collect())
        .collect();
    let mean = Metrics::from_fn(|i| {
        let defined = columns[i].iter().copied().filter(|v| !v.is_nan());
        if i == Metrics::SEARCH_SECONDS {
            defined.fold(f64::NAN, f64::min)
        } else {
            mean_defined(defined.map(Some))
        }
    });
    let rse = Metrics::from_fn(|i| relative_standard_error(&columns[i]));
    PopulationResults {
        samples: samples.len(),
        mean,
        rse,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reliability {
    /// Relative standard error below 1%.
    Reliable,
    /// Between 1% and 5%.
    Marginal,
    /// Above 5%, or undefined.
    Unreliable,
}

pub fn reliability(rse: f64) -> Reliability {
    if rse < 0.01 {
        Reliability::Reliable
    } else if rse <= 0.05 {
        Reliability::Marginal
    } else {
        Reliability::Unreliable
    }
}
