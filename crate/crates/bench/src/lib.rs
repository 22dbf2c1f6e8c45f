//! Workloads shared by the benchmarks.

use eonroute_core::sim::{run_keeping_state, RunConfig, TrafficConfig};
use eonroute_core::topology::{gabriel_seeded, GabrielParams};
use eonroute_core::{Demand, Multigraph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A default-size Gabriel graph holding the connections still active after
/// `days` days of traffic at `lambda` arrivals per day.
pub fn loaded_graph(seed: u64, lambda: f64, days: u32) -> Multigraph {
    let cfg = RunConfig {
        traffic: TrafficConfig {
            lambda,
            days,
            ..TrafficConfig::default()
        },
        verify: false,
        ..RunConfig::default()
    };
    let g = gabriel_seeded(&GabrielParams::default(), seed);
    run_keeping_state(g, seed, &cfg).1
}

/// Seeded random demands between distinct nodes of `g`.
pub fn demands(g: &Multigraph, count: usize, slices: usize, seed: u64) -> Vec<Demand> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.node_count();
    (0..count)
        .map(|_| {
            let s = rng.random_range(0..n);
            let t = (s + rng.random_range(1..n)) % n;
            Demand::new(NodeId::from(s), NodeId::from(t), slices).expect("distinct endpoints")
        })
        .collect()
}
