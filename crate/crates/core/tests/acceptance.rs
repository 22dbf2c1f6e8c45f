//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the full-scale simulation
//! criteria can share one campaign and report measured values.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    all_simple_paths, brute_force_optimum, check_slice_set_ops, naive_sigma, random_instance,
    random_operands,
};
use eonroute_core::baselines::{dijkstra_sp, yen_ksp};
use eonroute_core::routing::{search_with, LabelStore, SearchObserver, SearchOptions};
use eonroute_core::sim::{
    run, run_campaign, write_csv, CampaignRow, CampaignSpec, RunConfig, TrafficConfig,
};
use eonroute_core::topology::io::load_graph;
use eonroute_core::topology::{gabriel_seeded, population_stats, GabrielParams};
use eonroute_core::{
    search, AllocationPolicy, Demand, Multigraph, NodeId, Router, RouterKind, SliceSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> Multigraph {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    load_graph(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn labels_of(g: &Multigraph, path: &[eonroute_core::EdgeId]) -> Vec<u32> {
    path.iter().map(|&e| g.link_of(e).label).collect()
}

fn set(members: &[usize]) -> SliceSet {
    SliceSet::from_indices(4, members.iter().copied()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut problems = Vec::new();
    let decoy = fixture("decoy.graph");
    let d = Demand::new(NodeId(0), NodeId(2), 2).unwrap();

    let started = Instant::now();
    let r = search(&decoy, &d, 2000);
    let decoy_time = started.elapsed();
    match &r {
        Some(r)
            if labels_of(&decoy, &r.path) == [2, 3] && r.sigma == set(&[2, 3]) && r.cost == 12 => {}
        other => problems.push(format!("proposed on decoy returned {other:?}")),
    }
    for kind in [RouterKind::Edksp, RouterKind::Yenksp] {
        let attempt = Router::new(kind, 2000).route(&decoy, &d);
        if let Some(route) = attempt.route {
            problems.push(format!(
                "{kind} routed the decoy via links {:?} (sigma {})",
                labels_of(&decoy, &route.path),
                route.sigma
            ));
        }
    }

    let purge = fixture("purge.graph");
    let started = Instant::now();
    let out = search_with(&purge, &d, 2000, SearchOptions::default(), &mut ());
    let purge_time = started.elapsed();
    let at_i: Vec<_> = out.labels.labels(NodeId(1)).collect();
    if at_i.len() != 1 || at_i[0].ssc != set(&[1, 2, 3]) || at_i[0].cost != 1 {
        problems.push(format!("purge fixture labels at i: {at_i:?}"));
    }
    match &out.route {
        Some(r) if r.sigma == set(&[1, 2, 3]) => {}
        other => problems.push(format!("purge fixture route {other:?}")),
    }
    let limit = Duration::from_millis(1);
    if decoy_time >= limit || purge_time >= limit {
        problems.push(format!("too slow: {decoy_time:?}, {purge_time:?}"));
    }

    let summary = format!("decoy search {decoy_time:?}, purge search {purge_time:?}");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", problems.join("; ")))
    }
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = 1500;
    let mut search_mismatch = 0;
    let mut yen_mismatch = 0;
    let mut routed = 0;
    for _ in 0..instances {
        let (g, d) = random_instance(&mut rng, 8);
        let limit = 1_000_000;
        let found = search(&g, &d, limit);
        let ok = match (&found, brute_force_optimum(&g, &d, limit)) {
            (Some(r), Some(best)) => {
                routed += 1;
                r.cost == best
                    && g.is_walk(&r.path, d.source, d.target)
                    && g.is_simple(&r.path)
                    && r.sigma == naive_sigma(&g, &r.path, d.slices)
            }
            (None, None) => true,
            _ => false,
        };
        if !ok {
            search_mismatch += 1;
        }
        let k = rng.random_range(1..=10);
        let mut expected = all_simple_paths(&g, d.source, d.target);
        expected.truncate(k);
        if yen_ksp(&g, d.source, d.target, k) != expected {
            yen_mismatch += 1;
        }
    }
    let elapsed = started.elapsed();
    let summary = format!(
        "{instances} instances ({routed} routable), search mismatches {search_mismatch}, \
         Yen mismatches {yen_mismatch}, {elapsed:.2?}"
    );
    if search_mismatch == 0 && yen_mismatch == 0 && elapsed < Duration::from_secs(60) {
        Ok(summary)
    } else {
        Err(summary)
    }
}

#[derive(Default)]
struct Antichain {
    checks: usize,
    violations: usize,
}

impl SearchObserver for Antichain {
    fn relaxed(&mut self, node: NodeId, store: &LabelStore) {
        self.checks += 1;
        let labels: Vec<_> = store.labels(node).collect();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if i != j && a.better_or_equal(b) {
                    self.violations += 1;
                }
            }
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut algebra_failures = Vec::new();
    for _ in 0..10_000 {
        let (a, b, n, slot) = random_operands(&mut rng);
        if let Err(message) = check_slice_set_ops(&a, &b, n, slot) {
            algebra_failures.push(message);
        }
    }

    let mut antichain = Antichain::default();
    for _ in 0..3000 {
        let (g, d) = random_instance(&mut rng, 8);
        search_with(
            &g,
            &d,
            1_000_000,
            SearchOptions {
                exhaust_queue: true,
            },
            &mut antichain,
        );
    }
    let params = GabrielParams {
        nodes: 40,
        slices: 64,
        ..GabrielParams::default()
    };
    for seed in 0..20u64 {
        let mut g = gabriel_seeded(&params, seed);
        for e in (0..g.edge_count()).step_by(2) {
            for _ in 0..rng.random_range(0..8) {
                let len = rng.random_range(1..10);
                let start = rng.random_range(0..=64 - len);
                let _ = g.allocate(
                    &[eonroute_core::EdgeId(e as u32)],
                    eonroute_core::Slot::new(start, len),
                );
            }
        }
        for _ in 0..20 {
            let s = rng.random_range(0..40);
            let t = (s + rng.random_range(1..40)) % 40;
            let d = Demand::new(NodeId(s), NodeId(t), rng.random_range(1..8)).unwrap();
            search_with(&g, &d, 2000, SearchOptions::default(), &mut antichain);
        }
    }

    // verified runs assert conservation at every event and the validity of
    // every returned route; a violation panics
    let mut verified_runs = 0;
    let sim = std::panic::catch_unwind(|| {
        for router in RouterKind::ALL {
            for policy in AllocationPolicy::ALL {
                for (i, lambda) in [10.0, 80.0].into_iter().enumerate() {
                    let cfg = RunConfig {
                        network: GabrielParams {
                            nodes: 50,
                            slices: 100,
                            ..GabrielParams::default()
                        },
                        traffic: TrafficConfig {
                            lambda,
                            days: 30,
                            ..TrafficConfig::default()
                        },
                        router,
                        policy,
                        verify: true,
                        ..RunConfig::default()
                    };
                    run(i as u64, 77, &cfg);
                }
            }
        }
    });
    if sim.is_ok() {
        verified_runs = RouterKind::ALL.len() * AllocationPolicy::ALL.len() * 2;
    }

    let summary = format!(
        "slice-set cases 10000 ({} failures), antichain checks {} ({} violations), \
         verified runs {verified_runs}",
        algebra_failures.len(),
        antichain.checks,
        antichain.violations
    );
    if algebra_failures.is_empty() && antichain.violations == 0 && sim.is_ok() {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; first algebra failure: {:?}",
            algebra_failures.first()
        ))
    }
}

fn criterion_4() -> Outcome {
    let params = GabrielParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut compared = 0;
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let g = gabriel_seeded(&params, 10_000 + seed);
        for _ in 0..10 {
            let s = rng.random_range(0..params.nodes);
            let t = (s + rng.random_range(1..params.nodes)) % params.nodes;
            let n = rng.random_range(1..=40);
            let d = Demand::new(NodeId::from(s), NodeId::from(t), n).unwrap();
            let sp = dijkstra_sp(&g, d.source, d.target).map(|p| p.cost);
            let proposed = search(&g, &d, u64::MAX).map(|r| r.cost);
            compared += 1;
            if sp != proposed || sp.is_none() {
                mismatches += 1;
            }
        }
    }
    let summary = format!("100 graphs, {compared} demands, {mismatches} cost mismatches");
    if mismatches == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

const REPRO_LAMBDAS: [f64; 5] = [20.0, 35.0, 50.0, 150.0, 400.0];

fn reproduction_campaign() -> Result<Vec<CampaignRow>, String> {
    let spec = CampaignSpec {
        routers: RouterKind::ALL.to_vec(),
        policies: AllocationPolicy::ALL.to_vec(),
        lambdas: REPRO_LAMBDAS.to_vec(),
        samples: 5,
        seed: 2026,
        verify: true,
        ..CampaignSpec::default()
    };
    let started = Instant::now();
    let rows = run_campaign(&spec, 0, &|_, _| {}).map_err(|e| e.to_string())?;
    eprintln!(
        "reproduction campaign: {} runs in {:.1?}",
        spec.run_count(),
        started.elapsed()
    );
    Ok(rows)
}

fn row(
    rows: &[CampaignRow],
    router: RouterKind,
    policy: AllocationPolicy,
    lambda: f64,
) -> &CampaignRow {
    rows.iter()
        .find(|r| {
            r.population.router == router
                && r.population.policy == policy
                && r.population.lambda == lambda
        })
        .expect("population present")
}

fn standard_error(r: &CampaignRow) -> f64 {
    let se = r.results.rse.p_establish * r.results.mean.p_establish;
    if se.is_nan() {
        0.0
    } else {
        se
    }
}

fn criterion_5(rows: &[CampaignRow]) -> Outcome {
    use AllocationPolicy::Fittest;
    let mut problems = Vec::new();

    let p = &row(rows, RouterKind::Proposed, Fittest, 35.0).results.mean;
    let (util, prob) = (p.utilization, p.p_establish);
    if (util - 0.298).abs() > 0.03 || (prob - 0.969).abs() > 0.03 {
        problems.push(format!(
            "(i) proposed/fittest at lambda 35: utilization {util:.4}, p_establish {prob:.4}"
        ));
    }

    let e = &row(rows, RouterKind::Edksp, Fittest, 35.0).results.mean;
    if e.p_establish > 0.80 {
        problems.push(format!(
            "(ii) edksp/fittest at lambda 35: p_establish {:.4} > 0.80 (utilization {:.4})",
            e.p_establish, e.utilization
        ));
    }

    let mut dominance = 0;
    for policy in AllocationPolicy::ALL {
        for lambda in REPRO_LAMBDAS {
            let proposed = row(rows, RouterKind::Proposed, policy, lambda);
            for baseline in [RouterKind::Edksp, RouterKind::Yenksp] {
                let other = row(rows, baseline, policy, lambda);
                dominance += 1;
                let slack = standard_error(proposed) + standard_error(other);
                if proposed.results.mean.p_establish + slack < other.results.mean.p_establish {
                    problems.push(format!(
                        "(iii) {policy} lambda {lambda}: proposed {:.4} < {baseline} {:.4}",
                        proposed.results.mean.p_establish, other.results.mean.p_establish
                    ));
                }
            }
        }
    }

    let summary = format!(
        "proposed/fittest lambda 35: utilization {util:.4}, p_establish {prob:.4}; \
         edksp/fittest lambda 35: utilization {:.4}, p_establish {:.4}; {dominance} dominance comparisons",
        e.utilization, e.p_establish
    );
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", problems.join("; ")))
    }
}

fn criterion_6(rows: &[CampaignRow]) -> Outcome {
    let mut problems = Vec::new();
    let mut details = Vec::new();
    for policy in AllocationPolicy::ALL {
        let low = row(rows, RouterKind::Proposed, policy, 20.0)
            .results
            .mean
            .relaxations;
        let high = row(rows, RouterKind::Proposed, policy, 400.0)
            .results
            .mean
            .relaxations;
        details.push(format!(
            "proposed/{policy} relaxations {low:.1} -> {high:.1}"
        ));
        if high >= low {
            problems.push(format!("proposed/{policy} relaxations did not decrease"));
        }
        for baseline in [RouterKind::Edksp, RouterKind::Yenksp] {
            let counts: Vec<f64> = REPRO_LAMBDAS
                .iter()
                .map(|&l| row(rows, baseline, policy, l).results.mean.relaxations)
                .collect();
            let min = counts.iter().copied().fold(f64::INFINITY, f64::min);
            let max = counts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let spread = (max - min) / min;
            details.push(format!("{baseline}/{policy} spread {:.2}%", spread * 100.0));
            if spread >= 0.05 {
                problems.push(format!(
                    "{baseline}/{policy} candidate generation varies by {:.2}%",
                    spread * 100.0
                ));
            }
        }
    }
    let summary = details.join(", ");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", problems.join("; ")))
    }
}

fn criterion_7() -> Outcome {
    let params = GabrielParams::default();
    let graphs: Vec<Multigraph> = (0..50u64)
        .map(|seed| gabriel_seeded(&params, seed))
        .collect();
    let stats = population_stats(&graphs);
    let links = stats.links.mean;
    let degree = stats.node_degree.mean;
    let summary = format!("mean links {links:.2} (179.2), mean degree {degree:.4} (3.584)");
    if (links / 179.2 - 1.0).abs() <= 0.10 && (degree / 3.584 - 1.0).abs() <= 0.10 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_8() -> Outcome {
    let spec = CampaignSpec {
        routers: RouterKind::ALL.to_vec(),
        policies: vec![AllocationPolicy::First],
        lambdas: vec![15.0, 60.0],
        samples: 3,
        nodes: 30,
        slices: 80,
        days: 20,
        seed: 8,
        ..CampaignSpec::default()
    };
    let csv = |jobs: usize| -> Result<Vec<u8>, String> {
        let rows = run_campaign(&spec, jobs, &|_, _| {}).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        write_csv(&rows, &mut out).map_err(|e| e.to_string())?;
        Ok(out)
    };
    let reference = csv(1)?;
    let mut differing = Vec::new();
    for jobs in [1, 2, 4] {
        if csv(jobs)? != reference {
            differing.push(jobs);
        }
    }
    let summary = format!("{} bytes, compared with jobs 1, 1, 2, 4", reference.len());
    if differing.is_empty() {
        Ok(summary)
    } else {
        Err(format!("output differs for jobs {differing:?}; {summary}"))
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |number: u32, name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("[PASS] {number}. {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("[FAIL] {number}. {name}: {detail}");
        }
    };

    report(1, "worked-example fixtures", criterion_1());
    report(2, "oracle equivalence", criterion_2());
    report(3, "invariant suites", criterion_3());
    report(4, "classic shortest-path reduction", criterion_4());
    match reproduction_campaign() {
        Ok(rows) => {
            report(5, "desk-scale load sweep", criterion_5(&rows));
            report(6, "search-effort trend", criterion_6(&rows));
        }
        Err(e) => {
            report(5, "desk-scale load sweep", Err(e.clone()));
            report(6, "search-effort trend", Err(e));
        }
    }
    report(7, "topology statistics", criterion_7());
    report(8, "campaign determinism", criterion_8());

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
