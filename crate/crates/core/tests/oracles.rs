//! Search and baseline results against exhaustive enumeration.

mod common;

use common::{all_simple_paths, brute_force_optimum, naive_sigma, random_instance};
use eonroute_core::baselines::{dijkstra_sp, edge_disjoint_paths, yen_ksp};
use eonroute_core::{search, Multigraph, SliceSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn search_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut routed = 0;
    for _ in 0..2000 {
        let (g, d) = random_instance(&mut rng, 8);
        let limit = if rng.random_bool(0.3) {
            rng.random_range(1..60)
        } else {
            1_000_000
        };
        let expected = brute_force_optimum(&g, &d, limit);
        let found = search(&g, &d, limit);
        assert_eq!(
            found.as_ref().map(|r| r.cost),
            expected,
            "{g:?} {d:?} limit {limit}"
        );
        if let Some(r) = found {
            routed += 1;
            assert!(g.is_walk(&r.path, d.source, d.target));
            assert!(g.is_simple(&r.path));
            assert!(r.cost <= limit);
            assert_eq!(g.path_cost(&r.path), r.cost);
            assert_eq!(r.sigma, naive_sigma(&g, &r.path, d.slices));
        }
    }
    assert!(routed > 500, "too few routable instances ({routed})");
}

#[test]
fn shortest_path_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (g, d) = random_instance(&mut rng, 8);
        let all = all_simple_paths(&g, d.source, d.target);
        assert_eq!(dijkstra_sp(&g, d.source, d.target).as_ref(), all.first());
    }
}

#[test]
fn yen_matches_truncated_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (g, d) = random_instance(&mut rng, 8);
        let k = rng.random_range(1..=12);
        let mut all = all_simple_paths(&g, d.source, d.target);
        all.truncate(k);
        assert_eq!(yen_ksp(&g, d.source, d.target, k), all, "{g:?} {d:?} k {k}");
    }
}

#[test]
fn edge_disjoint_paths_share_no_link() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let (g, d) = random_instance(&mut rng, 8);
        let paths = edge_disjoint_paths(&g, d.source, d.target);
        let mut used = vec![false; g.link_count()];
        for p in &paths {
            assert!(g.is_walk(&p.edges, d.source, d.target));
            assert!(g.is_simple(&p.edges));
            for l in g.path_links(&p.edges) {
                assert!(!used[l.index()], "link reused");
                used[l.index()] = true;
            }
        }
        assert!(paths.windows(2).all(|w| w[0].cost <= w[1].cost));
        // the first one is the plain shortest path
        assert_eq!(paths.first(), dijkstra_sp(&g, d.source, d.target).as_ref());
        // once all used links are removed no path is left
        let mut rest = Multigraph::new(g.slices());
        rest.add_nodes(g.node_count());
        for link in g.links().iter().filter(|l| !used[l.id.index()]) {
            rest.add_link(
                link.endpoints.0,
                link.endpoints.1,
                link.length,
                SliceSet::full(8),
            );
        }
        assert!(all_simple_paths(&rest, d.source, d.target).is_empty());
    }
}

#[test]
fn full_spectrum_search_equals_shortest_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let (mut g, d) = random_instance(&mut rng, 8);
        g.clear_spectrum();
        let sp = dijkstra_sp(&g, d.source, d.target).map(|p| p.cost);
        assert_eq!(search(&g, &d, u64::MAX).map(|r| r.cost), sp);
    }
}
