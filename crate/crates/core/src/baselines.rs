//! Spectrum-blind comparison routers.
//!
//! Candidate paths are generated without looking at the spectrum (a single
//! shortest path, Yen's K shortest loopless paths, or successive
//! edge-disjoint shortest paths) and then tried in order by
//! [`route_over_candidates`] until one has a usable slice set.
//!
//! Every generator breaks cost ties deterministically: among equally cheap
//! paths the one with the lexicographically smallest arc-id sequence wins.
//! Shortest paths are computed by a reverse Dijkstra from the target
//! followed by a depth-first walk over tight arcs in ascending id order.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::routing::{Demand, RouteResult, SearchCounters};
use crate::topology::{Cost, EdgeId, Multigraph, NodeId};

/// A spectrum-blind path and its cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidatePath {
    pub cost: Cost,
    pub edges: Vec<EdgeId>,
}

/// Arcs and nodes hidden from a shortest path computation.
struct Mask {
    edge_off: Vec<bool>,
    node_off: Vec<bool>,
}

impl Mask {
    fn new(g: &Multigraph) -> Self {
        Mask {
            edge_off: vec![false; g.edge_count()],
            node_off: vec![false; g.node_count()],
        }
    }

    fn clear(&mut self) {
        self.edge_off.fill(false);
        self.node_off.fill(false);
    }
}

fn masked_shortest_path(
    g: &Multigraph,
    s: NodeId,
    t: NodeId,
    mask: &Mask,
    counters: &mut SearchCounters,
) -> Option<CandidatePath> {
    if mask.node_off[s.index()] || mask.node_off[t.index()] {
        return None;
    }
    if s == t {
        return Some(CandidatePath {
            cost: 0,
            edges: Vec::new(),
        });
    }

    // distances to t
    let mut dist = vec![Cost::MAX; g.node_count()];
    let mut settled = vec![false; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[t.index()] = 0;
    heap.push(Reverse((0, t)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v.index()] {
            continue;
        }
        if settled[s.index()] && d > dist[s.index()] {
            break;
        }
        settled[v.index()] = true;
        counters.queue_pops += 1;
        for &e in g.in_edges(v) {
            counters.relaxations += 1;
            if mask.edge_off[e.index()] {
                continue;
            }
            let arc = g.edge(e);
            let u = arc.source;
            if mask.node_off[u.index()] {
                continue;
            }
            let nd = d + arc.cost;
            if nd < dist[u.index()] {
                dist[u.index()] = nd;
                heap.push(Reverse((nd, u)));
            }
        }
    }
    if !settled[s.index()] {
        return None;
    }

    // lexicographically smallest simple path over tight arcs
    let tight = |e: EdgeId, on_path: &[bool]| {
        let arc = g.edge(e);
        let w = arc.target.index();
        !mask.edge_off[e.index()]
            && !mask.node_off[w]
            && !on_path[w]
            && dist[w] != Cost::MAX
            && dist[arc.source.index()] == arc.cost + dist[w]
    };
    let mut on_path = vec![false; g.node_count()];
    let mut stack: Vec<(NodeId, usize)> = vec![(s, 0)];
    let mut edges: Vec<EdgeId> = Vec::new();
    on_path[s.index()] = true;
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if v == t {
            return Some(CandidatePath {
                cost: dist[s.index()],
                edges,
            });
        }
        let out = g.out_edges(v);
        match (*next..out.len()).find(|&i| tight(out[i], &on_path)) {
            Some(i) => {
                *next = i + 1;
                let e = out[i];
                let w = g.edge(e).target;
                on_path[w.index()] = true;
                edges.push(e);
                stack.push((w, 0));
            }
            None => {
                on_path[v.index()] = false;
                stack.pop();
                edges.pop();
            }
        }
    }
    None
}

/// Cheapest path ignoring the spectrum.
pub fn dijkstra_sp(g: &Multigraph, s: NodeId, t: NodeId) -> Option<CandidatePath> {
    dijkstra_sp_counted(g, s, t, &mut SearchCounters::default())
}

pub fn dijkstra_sp_counted(
    g: &Multigraph,
    s: NodeId,
    t: NodeId,
    counters: &mut SearchCounters,
) -> Option<CandidatePath> {
    masked_shortest_path(g, s, t, &Mask::new(g), counters)
}

/// Yen's K shortest loopless paths, cheapest first.
pub fn yen_ksp(g: &Multigraph, s: NodeId, t: NodeId, k: usize) -> Vec<CandidatePath> {
    yen_ksp_counted(g, s, t, k, &mut SearchCounters::default())
}

pub fn yen_ksp_counted(
    g: &Multigraph,
    s: NodeId,
    t: NodeId,
    k: usize,
    counters: &mut SearchCounters,
) -> Vec<CandidatePath> {
    assert!(k >= 1, "K must be at least 1");
    let mut mask = Mask::new(g);
    let Some(first) = masked_shortest_path(g, s, t, &mask, counters) else {
        return Vec::new();
    };
    let mut found = vec![first];
    let mut known: HashSet<Vec<EdgeId>> = HashSet::new();
    known.insert(found[0].edges.clone());
    let mut candidates: BTreeSet<CandidatePath> = BTreeSet::new();

    while found.len() < k {
        let previous = found.last().expect("at least one path").clone();
        let mut spur_node = s;
        let mut root_cost = 0;
        for i in 0..previous.edges.len() {
            let root = &previous.edges[..i];
            for path in &found {
                if path.edges.len() > i && &path.edges[..i] == root {
                    mask.edge_off[path.edges[i].index()] = true;
                }
            }
            mask.node_off[s.index()] = i > 0;
            for &e in root {
                mask.node_off[g.edge(e).source.index()] = true;
            }
            if let Some(spur) = masked_shortest_path(g, spur_node, t, &mask, counters) {
                let mut edges = root.to_vec();
                edges.extend_from_slice(&spur.edges);
                if !known.contains(&edges) {
                    known.insert(edges.clone());
                    candidates.insert(CandidatePath {
                        cost: root_cost + spur.cost,
                        edges,
                    });
                }
            }
            mask.clear();
            let arc = g.edge(previous.edges[i]);
            spur_node = arc.target;
            root_cost += arc.cost;
        }
        match candidates.pop_first() {
            Some(next) => found.push(next),
            None => break,
        }
    }
    found
}

/// Repeated shortest paths, each time disabling every link already used.
pub fn edge_disjoint_paths(g: &Multigraph, s: NodeId, t: NodeId) -> Vec<CandidatePath> {
    edge_disjoint_paths_counted(g, s, t, &mut SearchCounters::default())
}

pub fn edge_disjoint_paths_counted(
    g: &Multigraph,
    s: NodeId,
    t: NodeId,
    counters: &mut SearchCounters,
) -> Vec<CandidatePath> {
    assert_ne!(s, t, "edge-disjoint paths need distinct endpoints");
    let mut mask = Mask::new(g);
    let mut paths = Vec::new();
    while let Some(path) = masked_shortest_path(g, s, t, &mask, counters) {
        for &e in &path.edges {
            for &arc in &g.link_of(e).arcs {
                mask.edge_off[arc.index()] = true;
            }
        }
        paths.push(path);
    }
    paths
}

/// Tries `candidates` in order and returns the first whose links share a
/// run of `demand.slices` contiguous free slices.
///
/// Candidates costing more than `limit` are skipped when a limit is given.
pub fn route_over_candidates(
    g: &Multigraph,
    candidates: &[CandidatePath],
    demand: &Demand,
    limit: Option<Cost>,
) -> Option<RouteResult> {
    route_over_candidates_counted(g, candidates, demand, limit, &mut SearchCounters::default())
}

pub fn route_over_candidates_counted(
    g: &Multigraph,
    candidates: &[CandidatePath],
    demand: &Demand,
    limit: Option<Cost>,
    counters: &mut SearchCounters,
) -> Option<RouteResult> {
    for candidate in candidates {
        counters.candidates_probed += 1;
        if limit.is_some_and(|m| candidate.cost > m) {
            continue;
        }
        let sigma = g.path_slices(&candidate.edges).trim(demand.slices);
        if sigma.supports(demand.slices) {
            return Some(RouteResult {
                path: candidate.edges.clone(),
                sigma,
                cost: candidate.cost,
                counters: *counters,
            });
        }
    }
    None
}
