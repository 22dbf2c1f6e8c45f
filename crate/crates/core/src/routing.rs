//! Spectrum-aware, length-limited label-setting shortest path search.
//!
//! A label is a `(cost, preceding edge, slice set)` triple. Unlike classic
//! Dijkstra a node keeps a *set* of labels, one per way of reaching it that
//! is not dominated by another: label `a` dominates `b` when `a` costs no
//! more and its slice set contains `b`'s. A node may therefore be visited
//! again at a higher cost if the new visit brings slices the earlier visits
//! did not, which is what lets the search escape the dead ends a plain
//! shortest path walks into.
//!
//! The queue holds unique `(cost, edge)` pairs. Popping one processes every
//! label of the edge's target with that exact cost and edge at once. Slice
//! sets are trimmed to their fragments of at least `n` slices on every
//! relaxation, since shorter fragments can never carry the demand further.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::spectrum::SliceSet;
use crate::topology::{Cost, EdgeId, Multigraph, NodeId};

/// A connection request for `slices` contiguous slices from `source` to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Demand {
    pub source: NodeId,
    pub target: NodeId,
    pub slices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DemandError {
    #[error("a demand needs at least one slice")]
    NoSlices,
    #[error("source and target are both {0}")]
    SameEndpoints(NodeId),
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
}

impl Demand {
    pub fn new(source: NodeId, target: NodeId, slices: usize) -> Result<Self, DemandError> {
        if slices == 0 {
            return Err(DemandError::NoSlices);
        }
        if source == target {
            return Err(DemandError::SameEndpoints(source));
        }
        Ok(Demand {
            source,
            target,
            slices,
        })
    }

    pub fn validate_for(&self, g: &Multigraph) -> Result<(), DemandError> {
        for v in [self.source, self.target] {
            if v.index() >= g.node_count() {
                return Err(DemandError::UnknownNode(v));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub cost: Cost,
    /// `None` is the null edge that starts every path at the source.
    pub edge: Option<EdgeId>,
    pub ssc: SliceSet,
    pub predecessor: Option<LabelId>,
}

impl Label {
    /// `self` costs no more than `other` and offers every slice `other` does.
    pub fn better_or_equal(&self, other: &Label) -> bool {
        self.cost <= other.cost && self.ssc.is_superset(&other.ssc)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.edge {
            Some(e) => write!(f, "({}, {}, {})", self.cost, e, self.ssc),
            None => write!(f, "({}, null, {})", self.cost, self.ssc),
        }
    }
}

/// Machine-independent effort counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchCounters {
    pub labels_created: u64,
    pub labels_purged: u64,
    pub queue_pops: u64,
    /// Edge scans: every (slice set, out-edge) pair examined.
    pub relaxations: u64,
    /// Candidate paths inspected by two-stage routers.
    pub candidates_probed: u64,
}

impl SearchCounters {
    pub fn merge(&mut self, other: &SearchCounters) {
        self.labels_created += other.labels_created;
        self.labels_purged += other.labels_purged;
        self.queue_pops += other.queue_pops;
        self.relaxations += other.relaxations;
        self.candidates_probed += other.candidates_probed;
    }
}

/// A routed demand: path, largest usable slice set along it, and cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    pub path: Vec<EdgeId>,
    pub sigma: SliceSet,
    pub cost: Cost,
    pub counters: SearchCounters,
}

/// All labels created during one search, live or purged.
#[derive(Debug, Default)]
pub struct LabelStore {
    arena: Vec<Label>,
    per_node: Vec<Vec<LabelId>>,
}

impl LabelStore {
    fn new(nodes: usize) -> Self {
        LabelStore {
            arena: Vec::new(),
            per_node: vec![Vec::new(); nodes],
        }
    }

    pub fn get(&self, id: LabelId) -> &Label {
        &self.arena[id.0 as usize]
    }

    /// Live labels of `v`, in insertion order.
    pub fn labels(&self, v: NodeId) -> impl Iterator<Item = &Label> + '_ {
        self.per_node[v.index()].iter().map(|&id| self.get(id))
    }

    pub fn label_ids(&self, v: NodeId) -> &[LabelId] {
        &self.per_node[v.index()]
    }

    fn insert(&mut self, v: NodeId, label: Label) -> LabelId {
        let id = LabelId(u32::try_from(self.arena.len()).expect("label arena overflow"));
        self.arena.push(label);
        self.per_node[v.index()].push(id);
        id
    }

    /// Follows predecessor references from `id` back to the null edge.
    pub fn trace(&self, id: LabelId) -> Result<Vec<EdgeId>, TraceError> {
        let mut path = Vec::new();
        let mut cursor = Some(id);
        while let Some(current) = cursor {
            let label = self
                .arena
                .get(current.0 as usize)
                .ok_or(TraceError::Dangling(current))?;
            match label.edge {
                Some(e) => path.push(e),
                None => break,
            }
            if path.len() > self.arena.len() {
                return Err(TraceError::Cycle);
            }
            cursor = label.predecessor;
            if cursor.is_none() {
                return Err(TraceError::Broken(current));
            }
        }
        path.reverse();
        Ok(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("label {0:?} does not exist")]
    Dangling(LabelId),
    #[error("label {0:?} has an edge but no predecessor")]
    Broken(LabelId),
    #[error("predecessor chain is cyclic")]
    Cycle,
}

/// Hooks for inspecting a running search; every method defaults to a no-op.
pub trait SearchObserver {
    /// A queue element was popped and node `node` is being visited.
    fn popped(&mut self, _cost: Cost, _edge: Option<EdgeId>, _node: NodeId) {}
    /// A label was added at `node` (after purging the labels it dominates).
    fn relaxed(&mut self, _node: NodeId, _store: &LabelStore) {}
}

impl SearchObserver for () {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Keep processing the queue after the target is first reached. The
    /// returned route is still the one found first.
    pub exhaust_queue: bool,
}

/// Outcome of a search, including the effort spent when no route exists.
#[derive(Debug)]
pub struct SearchOutcome {
    pub route: Option<RouteResult>,
    pub counters: SearchCounters,
    pub labels: LabelStore,
}

/// Finds the cheapest path of cost at most `limit` whose links share a run
/// of `demand.slices` free contiguous slices, with the largest such slice set.
pub fn search(g: &Multigraph, demand: &Demand, limit: Cost) -> Option<RouteResult> {
    search_with(g, demand, limit, SearchOptions::default(), &mut ()).route
}

pub fn search_with<O: SearchObserver + ?Sized>(
    g: &Multigraph,
    demand: &Demand,
    limit: Cost,
    options: SearchOptions,
    observer: &mut O,
) -> SearchOutcome {
    let n = demand.slices;
    let mut counters = SearchCounters::default();
    let mut store = LabelStore::new(g.node_count());
    let mut queue: BTreeSet<(Cost, Option<EdgeId>)> = BTreeSet::new();

    let initial = SliceSet::full(g.slices());
    if initial.supports(n) {
        store.insert(
            demand.source,
            Label {
                cost: 0,
                edge: None,
                ssc: initial,
                predecessor: None,
            },
        );
        counters.labels_created += 1;
        queue.insert((0, None));
    }

    let mut winner: Option<LabelId> = None;
    let mut current: Vec<LabelId> = Vec::new();

    while let Some((cost, edge)) = queue.pop_first() {
        counters.queue_pops += 1;
        let v = edge.map_or(demand.source, |e| g.edge(e).target);
        observer.popped(cost, edge, v);

        current.clear();
        current.extend(store.label_ids(v).iter().copied().filter(|&id| {
            let l = store.get(id);
            l.cost == cost && l.edge == edge
        }));

        if v == demand.target && winner.is_none() && !current.is_empty() {
            winner = current
                .iter()
                .copied()
                .min_by(|&a, &b| store.get(a).ssc.cmp(&store.get(b).ssc));
            if !options.exhaust_queue {
                break;
            }
        }

        for &from in &current {
            for &next_edge in g.out_edges(v) {
                counters.relaxations += 1;
                let arc = g.edge(next_edge);
                let next_cost = cost + arc.cost;
                if next_cost > limit {
                    continue;
                }
                let ssc = store
                    .get(from)
                    .ssc
                    .intersect_trim(&g.link(arc.link).available, n);
                if ssc.is_empty() {
                    continue;
                }
                let candidate = Label {
                    cost: next_cost,
                    edge: Some(next_edge),
                    ssc,
                    predecessor: Some(from),
                };
                let w = arc.target;
                if store.labels(w).any(|l| l.better_or_equal(&candidate)) {
                    continue;
                }
                let before = store.per_node[w.index()].len();
                let arena = &store.arena;
                store.per_node[w.index()]
                    .retain(|&id| !candidate.better_or_equal(&arena[id.0 as usize]));
                counters.labels_purged += (before - store.per_node[w.index()].len()) as u64;
                store.insert(w, candidate);
                counters.labels_created += 1;
                queue.insert((next_cost, Some(next_edge)));
                observer.relaxed(w, &store);
            }
        }
    }

    let route = winner.map(|id| {
        let label = store.get(id);
        RouteResult {
            path: store
                .trace(id)
                .expect("predecessor chain of a stored label is intact"),
            sigma: label.ssc.clone(),
            cost: label.cost,
            counters,
        }
    });
    SearchOutcome {
        route,
        counters,
        labels: store,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SliceSet;

    fn set(members: &[usize]) -> SliceSet {
        SliceSet::from_indices(4, members.iter().copied()).unwrap()
    }

    fn label(cost: Cost, edge: u32, members: &[usize]) -> Label {
        Label {
            cost,
            edge: Some(EdgeId(edge)),
            ssc: set(members),
            predecessor: None,
        }
    }

    /// s=0, i=1, t=2; links e1, e2 (parallel s-i) and e3 (i-t).
    fn figure(e1: (Cost, &[usize]), e2: (Cost, &[usize]), e3: (Cost, &[usize])) -> Multigraph {
        let mut g = Multigraph::new(4);
        let v = g.add_nodes(3);
        g.add_link(v[0], v[1], e1.0, set(e1.1));
        g.add_link(v[0], v[1], e2.0, set(e2.1));
        g.add_link(v[1], v[2], e3.0, set(e3.1));
        g
    }

    fn demand(slices: usize) -> Demand {
        Demand::new(NodeId(0), NodeId(2), slices).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(label(1, 1, &[1, 2]).better_or_equal(&label(3, 2, &[2])));
        assert!(label(1, 2, &[1, 2, 3]).better_or_equal(&label(1, 1, &[1, 2])));
        let a = label(1, 0, &[1, 2]);
        let b = label(2, 0, &[2, 3]);
        assert!(!a.better_or_equal(&b));
        assert!(!b.better_or_equal(&a));
        assert!(a.better_or_equal(&a));
    }

    #[test]
    fn demand_validation() {
        assert_eq!(
            Demand::new(NodeId(0), NodeId(1), 0),
            Err(DemandError::NoSlices)
        );
        assert_eq!(
            Demand::new(NodeId(1), NodeId(1), 2),
            Err(DemandError::SameEndpoints(NodeId(1)))
        );
        let g = figure((1, &[1]), (1, &[1]), (1, &[1]));
        assert!(Demand::new(NodeId(0), NodeId(7), 1)
            .unwrap()
            .validate_for(&g)
            .is_err());
    }

    #[test]
    fn revisits_to_escape_the_decoy() {
        let g = figure((1, &[1, 2]), (2, &[2, 3]), (10, &[2, 3]));
        let mut visits = VisitCounter::default();
        let out = search_with(&g, &demand(2), 100, SearchOptions::default(), &mut visits);
        let r = out.route.unwrap();
        // arcs: e1 = 0/1, e2 = 2/3, e3 = 4/5
        assert_eq!(r.path, vec![EdgeId(2), EdgeId(4)]);
        assert_eq!(r.cost, 12);
        assert_eq!(r.sigma, set(&[2, 3]));
        assert_eq!(visits.0[1], 2, "node i is visited twice");
    }

    #[test]
    fn purges_dominated_labels() {
        let g = figure((1, &[1, 2]), (1, &[1, 2, 3]), (1, &[1, 2, 3]));
        let out = search_with(&g, &demand(2), 100, SearchOptions::default(), &mut ());
        let at_i: Vec<_> = out.labels.labels(NodeId(1)).collect();
        assert_eq!(at_i.len(), 1);
        assert_eq!(at_i[0].cost, 1);
        assert_eq!(at_i[0].edge, Some(EdgeId(2)));
        assert_eq!(at_i[0].ssc, set(&[1, 2, 3]));
        let r = out.route.unwrap();
        assert_eq!(r.path, vec![EdgeId(2), EdgeId(4)]);
        assert_eq!(r.sigma, set(&[1, 2, 3]));
        assert_eq!(r.counters.labels_purged, 1);
    }

    #[test]
    fn loop_back_to_source_is_dominated() {
        let g = figure((1, &[1, 2]), (2, &[2, 3]), (10, &[2, 3]));
        let out = search_with(
            &g,
            &demand(1),
            100,
            SearchOptions {
                exhaust_queue: true,
            },
            &mut (),
        );
        let at_s: Vec<_> = out.labels.labels(NodeId(0)).collect();
        assert_eq!(at_s.len(), 1);
        assert_eq!(at_s[0].edge, None);
    }

    #[test]
    fn unsatisfiable_and_out_of_reach() {
        let g = figure((1, &[1, 2]), (2, &[2, 3]), (10, &[2, 3]));
        assert!(search(&g, &demand(5), 100).is_none());
        assert!(search(&g, &demand(3), 100).is_none());
        assert!(search(&g, &demand(2), 11).is_none(), "limit below 12");
        assert_eq!(search(&g, &demand(2), 12).unwrap().cost, 12);
    }

    #[test]
    fn single_edge_sigma_is_trimmed() {
        let mut g = Multigraph::new(8);
        let v = g.add_nodes(2);
        g.add_link(
            v[0],
            v[1],
            5,
            SliceSet::from_indices(8, [0, 2, 3, 4, 6, 7]).unwrap(),
        );
        let r = search(&g, &Demand::new(v[0], v[1], 2).unwrap(), 10).unwrap();
        assert_eq!(r.path, vec![EdgeId(0)]);
        assert_eq!(r.sigma, SliceSet::from_indices(8, [2, 3, 4, 6, 7]).unwrap());
    }

    #[test]
    fn equal_labels_keep_the_first() {
        let g = figure((1, &[1, 2]), (1, &[1, 2]), (1, &[1, 2]));
        let out = search_with(&g, &demand(2), 10, SearchOptions::default(), &mut ());
        let at_i: Vec<_> = out.labels.labels(NodeId(1)).collect();
        assert_eq!(at_i.len(), 1);
        assert_eq!(at_i[0].edge, Some(EdgeId(0)));
    }

    #[test]
    fn trace_reports_broken_chains() {
        let mut store = LabelStore::new(2);
        let id = store.insert(NodeId(1), label(1, 0, &[1]));
        assert_eq!(store.trace(id), Err(TraceError::Broken(id)));
        assert_eq!(
            store.trace(LabelId(9)),
            Err(TraceError::Dangling(LabelId(9)))
        );
    }

    #[derive(Default)]
    struct VisitCounter(Vec<usize>);

    impl SearchObserver for VisitCounter {
        fn popped(&mut self, _: Cost, _: Option<EdgeId>, node: NodeId) {
            if self.0.len() <= node.index() {
                self.0.resize(node.index() + 1, 0);
            }
            self.0[node.index()] += 1;
        }
    }
}
