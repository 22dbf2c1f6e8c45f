//! Dynamic traffic simulation over random Gabriel topologies.

mod campaign;
mod config;
mod engine;
mod metrics;

pub use campaign::{
    derive_seed, run_campaign, write_csv, CampaignError, CampaignRow, CampaignSpec, Population,
};
pub use config::{ConfigError, RunConfig, TrafficConfig, STANDARD_LAMBDAS};
pub use engine::{run, run_keeping_state, run_on_graph, Connection};
pub use metrics::{
    aggregate, relative_standard_error, reliability, DailyMetrics, Metrics, PopulationResults,
    Reliability, RunResults,
};
