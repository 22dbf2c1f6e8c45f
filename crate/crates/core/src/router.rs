//! One entry point over the proposed search and the two baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    edge_disjoint_paths_counted, route_over_candidates_counted, yen_ksp_counted,
};
use crate::routing::{search_with, Demand, RouteResult, SearchCounters, SearchOptions};
use crate::topology::{Cost, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouterKind {
    /// Spectrum-aware label-setting search.
    Proposed,
    /// Successive link-disjoint shortest paths.
    Edksp,
    /// Yen's K shortest loopless paths.
    Yenksp,
}

impl RouterKind {
    pub const ALL: [RouterKind; 3] = [RouterKind::Proposed, RouterKind::Edksp, RouterKind::Yenksp];

    pub fn name(self) -> &'static str {
        match self {
            RouterKind::Proposed => "proposed",
            RouterKind::Edksp => "edksp",
            RouterKind::Yenksp => "yenksp",
        }
    }
}

impl fmt::Display for RouterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RouterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proposed" => Ok(RouterKind::Proposed),
            "edksp" => Ok(RouterKind::Edksp),
            "yenksp" => Ok(RouterKind::Yenksp),
            other => Err(format!(
                "unknown router {other:?} (expected proposed, edksp or yenksp)"
            )),
        }
    }
}

/// A configured router.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Router {
    pub kind: RouterKind,
    /// Path length limit in km.
    pub limit: Cost,
    /// Number of candidates for [`RouterKind::Yenksp`].
    pub k: usize,
    /// Whether baseline candidates longer than `limit` are skipped.
    pub limit_baselines: bool,
}

impl Router {
    pub fn new(kind: RouterKind, limit: Cost) -> Self {
        Router {
            kind,
            limit,
            k: 10,
            limit_baselines: true,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_limit_baselines(mut self, on: bool) -> Self {
        self.limit_baselines = on;
        self
    }
}

/// Result of one routing call, blocked or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteAttempt {
    pub route: Option<RouteResult>,
    pub counters: SearchCounters,
}

impl Router {
    pub fn route(&self, g: &Multigraph, demand: &Demand) -> RouteAttempt {
        match self.kind {
            RouterKind::Proposed => {
                let outcome = search_with(g, demand, self.limit, SearchOptions::default(), &mut ());
                RouteAttempt {
                    route: outcome.route,
                    counters: outcome.counters,
                }
            }
            RouterKind::Edksp | RouterKind::Yenksp => {
                let mut counters = SearchCounters::default();
                let candidates = if self.kind == RouterKind::Edksp {
                    edge_disjoint_paths_counted(g, demand.source, demand.target, &mut counters)
                } else {
                    yen_ksp_counted(g, demand.source, demand.target, self.k, &mut counters)
                };
                let limit = self.limit_baselines.then_some(self.limit);
                let route =
                    route_over_candidates_counted(g, &candidates, demand, limit, &mut counters);
                RouteAttempt { route, counters }
            }
        }
    }
}
