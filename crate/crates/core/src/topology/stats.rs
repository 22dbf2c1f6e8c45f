use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use super::{Cost, Multigraph, NodeId};

/// Min / mean / max / population variance of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub variance: f64,
}

impl Summary {
    /// All fields are NaN for an empty sample.
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Summary {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return Summary {
                count: 0,
                min: f64::NAN,
                mean: f64::NAN,
                max: f64::NAN,
                variance: f64::NAN,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        Summary {
            count: values.len(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            mean,
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            variance: values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n,
        }
    }
}

/// Topology statistics in the layout of the usual network summary table.
///
/// Shortest paths are taken over unordered reachable node pairs by km cost;
/// hop counts are the fewest hops among the km-shortest paths.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub graphs: usize,
    pub links: Summary,
    pub link_length: Summary,
    pub node_degree: Summary,
    pub sp_length: Summary,
    pub sp_hops: Summary,
}

#[derive(Default)]
struct Samples {
    links: Vec<f64>,
    link_length: Vec<f64>,
    node_degree: Vec<f64>,
    sp_length: Vec<f64>,
    sp_hops: Vec<f64>,
}

impl Samples {
    fn add(&mut self, g: &Multigraph) {
        self.links.push(g.link_count() as f64);
        self.link_length
            .extend(g.links().iter().map(|l| l.length as f64));
        self.node_degree
            .extend(g.degrees().into_iter().map(|d| d as f64));
        for source in g.nodes() {
            let best = distances_from(g, source);
            for (km, hops) in best.iter().skip(source.index() + 1).flatten() {
                self.sp_length.push(*km as f64);
                self.sp_hops.push(*hops as f64);
            }
        }
    }

    fn finish(self, graphs: usize) -> GraphStats {
        GraphStats {
            graphs,
            links: Summary::of(self.links),
            link_length: Summary::of(self.link_length),
            node_degree: Summary::of(self.node_degree),
            sp_length: Summary::of(self.sp_length),
            sp_hops: Summary::of(self.sp_hops),
        }
    }
}

/// `(km, hops)` of the best path from `source` to every node.
fn distances_from(g: &Multigraph, source: NodeId) -> Vec<Option<(Cost, usize)>> {
    let mut best: Vec<Option<(Cost, usize)>> = vec![None; g.node_count()];
    let mut heap = BinaryHeap::new();
    best[source.index()] = Some((0, 0));
    heap.push(Reverse((0, 0, source)));
    while let Some(Reverse((km, hops, v))) = heap.pop() {
        if best[v.index()] != Some((km, hops)) {
            continue;
        }
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            let next = (km + edge.cost, hops + 1);
            let slot = &mut best[edge.target.index()];
            if slot.is_none_or(|cur| next < cur) {
                *slot = Some(next);
                heap.push(Reverse((next.0, next.1, edge.target)));
            }
        }
    }
    best
}

pub fn graph_stats(g: &Multigraph) -> GraphStats {
    population_stats(std::slice::from_ref(g))
}

/// Statistics pooled over several graphs: the link count is summarised
/// per graph, every other row over all links, nodes or node pairs.
pub fn population_stats(graphs: &[Multigraph]) -> GraphStats {
    let mut samples = Samples::default();
    for g in graphs {
        samples.add(g);
    }
    samples.finish(graphs.len())
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16} {:>10} {:>12} {:>10} {:>14}",
            "value", "min", "average", "max", "variance"
        )?;
        let rows = [
            ("Number of links", &self.links),
            ("Link length", &self.link_length),
            ("Node degree", &self.node_degree),
            ("SP length", &self.sp_length),
            ("SP hops min", &self.sp_hops),
        ];
        for (name, s) in rows {
            writeln!(
                f,
                "{:<16} {:>10} {:>12.6} {:>10} {:>14.6}",
                name, s.min, s.mean, s.max, s.variance
            )?;
        }
        Ok(())
    }
}
