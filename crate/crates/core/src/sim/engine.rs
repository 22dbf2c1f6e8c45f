use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};

use super::config::RunConfig;
use super::metrics::{DailyMetrics, RunResults};
use crate::routing::{Demand, SearchCounters};
use crate::spectrum::Slot;
use crate::topology::{gabriel_seeded, EdgeId, Multigraph, NodeId};

/// An established demand holding its slot until `teardown_time`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub demand: Demand,
    pub path: Vec<EdgeId>,
    pub slot: Slot,
    pub teardown_time: f64,
}

#[derive(Debug)]
enum EventKind {
    // declared first so a teardown sorts before an arrival at the same instant
    Teardown(Connection),
    Arrival,
}

#[derive(Debug)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl Event {
    fn key(&self) -> (f64, u8, u64) {
        let rank = match self.kind {
            EventKind::Teardown(_) => 0,
            EventKind::Arrival => 1,
        };
        (self.time, rank, self.seq)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // reversed: BinaryHeap is a max-heap and the earliest event must come out first
    fn cmp(&self, other: &Self) -> Ordering {
        let (ta, ra, sa) = self.key();
        let (tb, rb, sb) = other.key();
        tb.total_cmp(&ta).then(rb.cmp(&ra)).then(sb.cmp(&sa))
    }
}

#[derive(Default)]
struct DayTally {
    arrivals: u64,
    established: u64,
    length_km: u64,
    slices: u64,
    search_seconds: f64,
    counters: SearchCounters,
}

fn ratio(sum: f64, count: u64) -> Option<f64> {
    (count > 0).then(|| sum / count as f64)
}

struct Simulation<'a> {
    cfg: &'a RunConfig,
    g: Multigraph,
    rng: ChaCha8Rng,
    interarrival: Exp<f64>,
    holding: Exp<f64>,
    slices: Poisson<f64>,
    events: BinaryHeap<Event>,
    seq: u64,
    active: usize,
    capacity: u64,
    // slices held by active connections, counted once per link
    held: usize,
    tally: DayTally,
}

impl<'a> Simulation<'a> {
    fn new(g: Multigraph, traffic_seed: u64, cfg: &'a RunConfig) -> Self {
        let t = &cfg.traffic;
        Simulation {
            cfg,
            g,
            rng: ChaCha8Rng::seed_from_u64(traffic_seed),
            interarrival: Exp::new(t.lambda).expect("validated rate"),
            holding: Exp::new(1.0 / t.holding_mean).expect("validated holding time"),
            slices: Poisson::new(t.mean_slices).expect("validated slice mean"),
            events: BinaryHeap::new(),
            seq: 0,
            active: 0,
            capacity: 0,
            held: 0,
            tally: DayTally::default(),
        }
    }

    fn schedule(&mut self, time: f64, kind: EventKind) {
        self.seq += 1;
        self.events.push(Event {
            time,
            seq: self.seq,
            kind,
        });
    }

    fn schedule_arrival(&mut self, now: f64) {
        let gap = self.interarrival.sample(&mut self.rng);
        self.schedule(now + gap, EventKind::Arrival);
    }

    fn draw_demand(&mut self) -> (Demand, f64) {
        let nodes = self.g.node_count();
        let s = self.rng.random_range(0..nodes);
        let mut t = self.rng.random_range(0..nodes - 1);
        if t >= s {
            t += 1;
        }
        let n = loop {
            let n = self.slices.sample(&mut self.rng) as usize;
            if n >= 1 {
                break n;
            }
        };
        let holding = self.holding.sample(&mut self.rng);
        let demand = Demand::new(NodeId::from(s), NodeId::from(t), n).expect("distinct endpoints");
        (demand, holding)
    }

    fn arrive(&mut self, now: f64) {
        let (demand, holding) = self.draw_demand();
        self.schedule_arrival(now);

        let router = self.cfg.router();
        let started = self.cfg.measure_time.then(Instant::now);
        let attempt = router.route(&self.g, &demand);
        if let Some(started) = started {
            self.tally.search_seconds += started.elapsed().as_secs_f64();
        }
        self.tally.arrivals += 1;
        self.tally.counters.merge(&attempt.counters);

        let Some(route) = attempt.route else {
            return;
        };
        if self.cfg.verify {
            self.check_route(&demand, &route.path, &route.sigma, route.cost);
        }
        let slot = self
            .cfg
            .policy
            .allocate(&route.sigma, demand.slices)
            .expect("sigma supports the demand");
        self.g
            .allocate(&route.path, slot)
            .expect("slot is free on every link of the route");

        self.tally.established += 1;
        self.tally.length_km += route.cost;
        self.tally.slices += demand.slices as u64;
        self.active += 1;
        self.capacity += demand.slices as u64;
        self.held += demand.slices * self.g.path_links(&route.path).len();
        let connection = Connection {
            demand,
            path: route.path,
            slot,
            teardown_time: now + holding,
        };
        self.schedule(connection.teardown_time, EventKind::Teardown(connection));
    }

    fn tear_down(&mut self, connection: Connection) {
        self.g
            .release(&connection.path, connection.slot)
            .expect("released slot was allocated");
        self.active -= 1;
        self.capacity -= connection.demand.slices as u64;
        self.held -= connection.demand.slices * self.g.path_links(&connection.path).len();
    }

    fn check_route(
        &self,
        demand: &Demand,
        path: &[EdgeId],
        sigma: &crate::spectrum::SliceSet,
        cost: u64,
    ) {
        let g = &self.g;
        assert!(
            g.is_walk(path, demand.source, demand.target),
            "route is not a walk"
        );
        assert!(g.is_simple(path), "route revisits a node");
        assert_eq!(g.path_cost(path), cost, "route cost mismatch");
        let router = self.cfg.router();
        if self.cfg.router == crate::router::RouterKind::Proposed || router.limit_baselines {
            assert!(cost <= self.cfg.limit_km, "route exceeds the length limit");
        }
        assert!(
            sigma.is_subset(&g.path_slices(path)),
            "sigma is not free on the path"
        );
        assert!(
            sigma.supports(demand.slices),
            "sigma cannot hold the demand"
        );
    }

    fn check_conservation(&self) {
        assert_eq!(
            self.g.available_slices() + self.held,
            self.g.total_slices(),
            "slice conservation violated"
        );
    }

    fn close_day(&mut self) -> DailyMetrics {
        let t = std::mem::take(&mut self.tally);
        DailyMetrics {
            utilization: self.g.utilization(),
            arrivals: t.arrivals,
            established: t.established,
            p_establish: ratio(t.established as f64, t.arrivals),
            active_connections: self.active,
            capacity_served: self.capacity,
            mean_connection_length: ratio(t.length_km as f64, t.established),
            mean_connection_slices: ratio(t.slices as f64, t.established),
            mean_edge_fragments: self.g.mean_fragments(),
            mean_search_seconds: if self.cfg.measure_time {
                ratio(t.search_seconds, t.arrivals)
            } else {
                None
            },
            counters: t.counters,
        }
    }

    fn run(mut self) -> (RunResults, Multigraph) {
        let days = self.cfg.traffic.days;
        let mut daily = Vec::with_capacity(days as usize);
        self.schedule_arrival(0.0);
        for day in 0..days {
            let end = f64::from(day + 1);
            while self.events.peek().is_some_and(|e| e.time < end) {
                let event = self.events.pop().expect("peeked");
                match event.kind {
                    EventKind::Arrival => self.arrive(event.time),
                    EventKind::Teardown(connection) => self.tear_down(connection),
                }
                if self.cfg.verify {
                    self.check_conservation();
                }
            }
            daily.push(self.close_day());
        }
        (
            RunResults::from_days(daily, self.cfg.pooled_p_establish),
            self.g,
        )
    }
}

/// Simulates `cfg.traffic.days` days on a fresh Gabriel graph.
///
/// The graph comes from `graph_seed` and the traffic from `traffic_seed`;
/// together with `cfg` they determine the result exactly unless
/// `cfg.measure_time` is set.
///
/// # Panics
///
/// Panics if `cfg` is invalid.
pub fn run(graph_seed: u64, traffic_seed: u64, cfg: &RunConfig) -> RunResults {
    cfg.validate().expect("invalid run configuration");
    let g = gabriel_seeded(&cfg.network, graph_seed);
    run_on_graph(g, traffic_seed, cfg)
}

/// Like [`run`] but on a given topology; its spectrum is reset first.
pub fn run_on_graph(g: Multigraph, traffic_seed: u64, cfg: &RunConfig) -> RunResults {
    run_keeping_state(g, traffic_seed, cfg).0
}

/// Like [`run_on_graph`], also returning the topology with the spectrum of
/// the connections still active at the end.
pub fn run_keeping_state(
    mut g: Multigraph,
    traffic_seed: u64,
    cfg: &RunConfig,
) -> (RunResults, Multigraph) {
    cfg.traffic
        .validate()
        .expect("invalid traffic configuration");
    assert!(g.node_count() >= 2, "traffic needs at least two nodes");
    g.clear_spectrum();
    Simulation::new(g, traffic_seed, cfg).run()
}
