use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policies::AllocationPolicy;
use crate::router::{Router, RouterKind};
use crate::topology::{Cost, GabrielParams};

/// Arrival rates (demands per day) of the standard 27-point load sweep.
pub const STANDARD_LAMBDAS: [f64; 27] = [
    10.0, 12.5, 15.0, 17.5, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 70.0, 80.0, 90.0,
    100.0, 150.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0, 900.0, 1000.0,
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot parse configuration: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(message.into())
}

fn check_positive(name: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Dynamic traffic model. Time is measured in days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficConfig {
    /// Mean arrivals per day (exponential interarrival times).
    pub lambda: f64,
    /// Mean holding time in days (exponential).
    pub holding_mean: f64,
    /// Mean of the Poisson slice demand (zeros are redrawn).
    pub mean_slices: f64,
    /// Simulated days.
    pub days: u32,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            lambda: 35.0,
            holding_mean: 10.0,
            mean_slices: 10.0,
            days: 100,
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("lambda", self.lambda)?;
        check_positive("holding_mean", self.holding_mean)?;
        check_positive("mean_slices", self.mean_slices)?;
        if self.days == 0 {
            return Err(invalid("days must be at least 1"));
        }
        Ok(())
    }
}

/// Everything one simulation run needs besides its seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub network: GabrielParams,
    pub traffic: TrafficConfig,
    pub router: RouterKind,
    pub policy: AllocationPolicy,
    pub limit_km: Cost,
    /// Candidate count for Yen routing.
    pub k: usize,
    /// Skip baseline candidates longer than `limit_km`.
    pub limit_baselines: bool,
    /// Report the run's p_establish as established / attempted over the
    /// whole run instead of the mean of the daily ratios.
    pub pooled_p_establish: bool,
    /// Measure wall-clock search time (makes results nondeterministic).
    pub measure_time: bool,
    /// Check slice conservation and route validity at every event.
    pub verify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            network: GabrielParams::default(),
            traffic: TrafficConfig::default(),
            router: RouterKind::Proposed,
            policy: AllocationPolicy::Fittest,
            limit_km: 2000,
            k: 10,
            limit_baselines: true,
            pooled_p_establish: false,
            measure_time: false,
            verify: cfg!(debug_assertions),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.traffic.validate()?;
        if self.network.nodes < 2 {
            return Err(invalid("at least two nodes are needed"));
        }
        check_positive("width", self.network.width)?;
        check_positive("height", self.network.height)?;
        if self.network.slices == 0 {
            return Err(invalid("slices must be at least 1"));
        }
        if self.k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        Ok(())
    }

    pub fn router(&self) -> Router {
        Router::new(self.router, self.limit_km)
            .with_k(self.k)
            .with_limit_baselines(self.limit_baselines)
    }
}
