use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{ConfigError, RunConfig, TrafficConfig, STANDARD_LAMBDAS};
use super::engine::run;
use super::metrics::{aggregate, reliability, Metrics, PopulationResults, Reliability};
use crate::policies::AllocationPolicy;
use crate::router::RouterKind;
use crate::topology::{Cost, GabrielParams};

/// A grid of populations: every router × policy × arrival rate, each run
/// `samples` times on different graphs and traffic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignSpec {
    pub routers: Vec<RouterKind>,
    pub policies: Vec<AllocationPolicy>,
    pub lambdas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub nodes: usize,
    pub width: f64,
    pub height: f64,
    pub slices: usize,
    pub limit_km: Cost,
    pub k: usize,
    pub days: u32,
    pub holding_mean: f64,
    pub mean_slices: f64,
    pub limit_baselines: bool,
    pub pooled_p_establish: bool,
    pub measure_time: bool,
    pub verify: bool,
}

impl Default for CampaignSpec {
    fn default() -> Self {
        let run = RunConfig::default();
        CampaignSpec {
            routers: RouterKind::ALL.to_vec(),
            policies: AllocationPolicy::ALL.to_vec(),
            lambdas: STANDARD_LAMBDAS.to_vec(),
            samples: 50,
            seed: 1,
            nodes: run.network.nodes,
            width: run.network.width,
            height: run.network.height,
            slices: run.network.slices,
            limit_km: run.limit_km,
            k: run.k,
            days: run.traffic.days,
            holding_mean: run.traffic.holding_mean,
            mean_slices: run.traffic.mean_slices,
            limit_baselines: run.limit_baselines,
            pooled_p_establish: run.pooled_p_establish,
            measure_time: false,
            verify: false,
        }
    }
}

/// One cell of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Population {
    pub router: RouterKind,
    pub policy: AllocationPolicy,
    pub lambda: f64,
    /// Position of `lambda` in the spec's list; selects the traffic stream.
    pub lambda_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignRow {
    pub population: Population,
    pub results: PopulationResults,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot start worker threads: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
    #[error(
        "run panicked ({router}/{policy}, lambda {lambda}, sample {sample}, \
         graph seed {graph_seed}, traffic seed {traffic_seed}): {message}"
    )]
    RunPanicked {
        router: RouterKind,
        policy: AllocationPolicy,
        lambda: f64,
        sample: usize,
        graph_seed: u64,
        traffic_seed: u64,
        message: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a stream number and an index.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index)
}

impl CampaignSpec {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let spec: CampaignSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let empty = |what: &str| ConfigError::Invalid(format!("{what} list is empty"));
        if self.routers.is_empty() {
            return Err(empty("routers"));
        }
        if self.policies.is_empty() {
            return Err(empty("policies"));
        }
        if self.lambdas.is_empty() {
            return Err(empty("lambdas"));
        }
        if self.samples == 0 {
            return Err(ConfigError::Invalid("samples must be at least 1".into()));
        }
        for p in self.populations() {
            self.run_config(&p).validate()?;
        }
        Ok(())
    }

    /// Populations in output order: router, then policy, then arrival rate.
    pub fn populations(&self) -> Vec<Population> {
        let mut out = Vec::new();
        for &router in &self.routers {
            for &policy in &self.policies {
                for (lambda_index, &lambda) in self.lambdas.iter().enumerate() {
                    out.push(Population {
                        router,
                        policy,
                        lambda,
                        lambda_index,
                    });
                }
            }
        }
        out
    }

    pub fn run_config(&self, p: &Population) -> RunConfig {
        RunConfig {
            network: GabrielParams {
                nodes: self.nodes,
                width: self.width,
                height: self.height,
                slices: self.slices,
            },
            traffic: TrafficConfig {
                lambda: p.lambda,
                holding_mean: self.holding_mean,
                mean_slices: self.mean_slices,
                days: self.days,
            },
            router: p.router,
            policy: p.policy,
            limit_km: self.limit_km,
            k: self.k,
            limit_baselines: self.limit_baselines,
            pooled_p_establish: self.pooled_p_establish,
            measure_time: self.measure_time,
            verify: self.verify,
        }
    }

    /// Seeds of one run. Sample `i` sees the same graph under every
    /// population and the same traffic under every router and policy, so
    /// comparisons between routers are paired.
    pub fn seeds(&self, p: &Population, sample: usize) -> (u64, u64) {
        let graph = derive_seed(self.seed, 0, sample as u64);
        let traffic = derive_seed(self.seed, 1 + p.lambda_index as u64, sample as u64);
        (graph, traffic)
    }

    pub fn run_count(&self) -> usize {
        self.populations().len() * self.samples
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

/// Runs every sample of every population on `jobs` worker threads (0 picks
/// the number of cores). Output order and values do not depend on `jobs`.
///
/// `progress` is called with (finished runs, total runs) after each run.
pub fn run_campaign(
    spec: &CampaignSpec,
    jobs: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<CampaignRow>, CampaignError> {
    spec.validate()?;
    let populations = spec.populations();
    let tasks: Vec<(usize, usize)> = (0..populations.len())
        .flat_map(|p| (0..spec.samples).map(move |s| (p, s)))
        .collect();
    let total = tasks.len();
    let done = AtomicUsize::new(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;

    let summaries: Vec<Result<Metrics, CampaignError>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(p, sample)| {
                let population = &populations[p];
                let cfg = spec.run_config(population);
                let (graph_seed, traffic_seed) = spec.seeds(population, sample);
                let outcome =
                    panic::catch_unwind(AssertUnwindSafe(|| run(graph_seed, traffic_seed, &cfg)));
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
                outcome.map(|r| r.summary).map_err(|payload| {
                    let err = CampaignError::RunPanicked {
                        router: population.router,
                        policy: population.policy,
                        lambda: population.lambda,
                        sample,
                        graph_seed,
                        traffic_seed,
                        message: panic_message(payload),
                    };
                    log::error!("{err}");
                    err
                })
            })
            .collect()
    });
    let summaries: Vec<Metrics> = summaries.into_iter().collect::<Result<_, _>>()?;

    let rows: Vec<CampaignRow> = populations
        .iter()
        .zip(summaries.chunks(spec.samples))
        .map(|(population, samples)| CampaignRow {
            population: *population,
            results: aggregate(samples),
        })
        .collect();
    for row in &rows {
        let rse = row.results.rse.p_establish;
        if row.results.samples >= 2 && reliability(rse) != Reliability::Reliable {
            let p = &row.population;
            log::warn!(
                "{}/{} lambda {}: p_establish relative standard error {:.3}% exceeds 1%",
                p.router,
                p.policy,
                p.lambda,
                rse * 100.0
            );
        }
    }
    Ok(rows)
}

fn number(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

pub fn csv_header() -> Vec<String> {
    let mut header: Vec<String> = ["router", "policy", "lambda", "samples"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for (i, name) in Metrics::NAMES.iter().enumerate() {
        if i == Metrics::SEARCH_SECONDS {
            header.push(format!("{name}_min"));
        } else {
            header.push(name.to_string());
        }
    }
    for (i, name) in Metrics::NAMES.iter().enumerate() {
        if i != Metrics::SEARCH_SECONDS {
            header.push(format!("rse_{name}"));
        }
    }
    header
}

/// Writes one header row and one row per population. Numbers use the
/// shortest text that reads back to the same `f64`; undefined values are
/// left empty.
pub fn write_csv<W: Write>(rows: &[CampaignRow], writer: W) -> Result<(), CampaignError> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(csv_header())?;
    for row in rows {
        let p = &row.population;
        let mut record = vec![
            p.router.to_string(),
            p.policy.to_string(),
            number(p.lambda),
            row.results.samples.to_string(),
        ];
        record.extend(row.results.mean.values().into_iter().map(number));
        record.extend(
            row.results
                .rse
                .values()
                .into_iter()
                .enumerate()
                .filter(|&(i, _)| i != Metrics::SEARCH_SECONDS)
                .map(|(_, v)| number(v)),
        );
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}
