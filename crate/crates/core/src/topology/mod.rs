//! Directed multigraph with per-link spectrum pools.
//!
//! An optical link is one fibre resource: both of its arcs point at the same
//! [`Link`] and therefore see (and consume) one shared [`SliceSet`]. Arcs
//! created with [`Multigraph::add_arc`] own a single-arc link of their own.

mod gabriel;
pub mod io;
mod stats;

pub use gabriel::{gabriel_generate, gabriel_graph, gabriel_seeded, GabrielParams};
pub use stats::{graph_stats, population_stats, GraphStats, Summary};

use std::fmt;

use thiserror::Error;

use crate::spectrum::{SliceSet, Slot, SpectrumError};

/// Path cost in kilometres.
pub type Cost = u64;

macro_rules! dense_id {
    ($name:ident, $prefix:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(u32::try_from(i).expect("identifier overflow"))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

dense_id!(NodeId, "v");
dense_id!(EdgeId, "a");
dense_id!(LinkId, "l");

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One directed arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: NodeId,
    pub target: NodeId,
    pub cost: Cost,
    pub link: LinkId,
}

/// A spectrum pool shared by the arcs listed in `arcs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    /// External name used by the graph file format and CLI output.
    pub label: u32,
    pub endpoints: (NodeId, NodeId),
    pub length: Cost,
    pub available: SliceSet,
    pub arcs: Vec<EdgeId>,
}

impl Link {
    pub fn is_bidirectional(&self) -> bool {
        self.arcs.len() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocationError {
    #[error("path is empty")]
    EmptyPath,
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("link {link}: {source}")]
    Inconsistent {
        link: LinkId,
        #[source]
        source: SpectrumError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    slices: usize,
    nodes: Vec<Point>,
    edges: Vec<Edge>,
    links: Vec<Link>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// An empty graph whose links carry `slices` slices each.
    pub fn new(slices: usize) -> Self {
        Multigraph {
            slices,
            nodes: Vec::new(),
            edges: Vec::new(),
            links: Vec::new(),
            out_adj: Vec::new(),
            in_adj: Vec::new(),
        }
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn add_node(&mut self, position: Point) -> NodeId {
        let id = NodeId::from(self.nodes.len());
        self.nodes.push(position);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        id
    }

    pub fn add_nodes(&mut self, count: usize) -> Vec<NodeId> {
        (0..count)
            .map(|_| self.add_node(Point::default()))
            .collect()
    }

    /// Adds an undirected link as two opposing arcs sharing one pool.
    pub fn add_link(&mut self, u: NodeId, v: NodeId, cost: Cost, available: SliceSet) -> LinkId {
        let label = self.links.len() as u32;
        self.add_labeled_link(label, u, v, cost, available)
    }

    pub fn add_labeled_link(
        &mut self,
        label: u32,
        u: NodeId,
        v: NodeId,
        cost: Cost,
        available: SliceSet,
    ) -> LinkId {
        let link = self.push_link(label, u, v, cost, available);
        self.push_arc(u, v, cost, link);
        self.push_arc(v, u, cost, link);
        link
    }

    /// Adds a single directed arc with a spectrum pool of its own.
    pub fn add_arc(&mut self, u: NodeId, v: NodeId, cost: Cost, available: SliceSet) -> EdgeId {
        let label = self.links.len() as u32;
        let link = self.push_link(label, u, v, cost, available);
        self.push_arc(u, v, cost, link)
    }

    fn push_link(
        &mut self,
        label: u32,
        u: NodeId,
        v: NodeId,
        cost: Cost,
        available: SliceSet,
    ) -> LinkId {
        assert!(u.index() < self.nodes.len() && v.index() < self.nodes.len());
        assert_eq!(available.universe(), self.slices, "link universe mismatch");
        let id = LinkId::from(self.links.len());
        self.links.push(Link {
            id,
            label,
            endpoints: (u, v),
            length: cost,
            available,
            arcs: Vec::with_capacity(2),
        });
        id
    }

    fn push_arc(&mut self, u: NodeId, v: NodeId, cost: Cost, link: LinkId) -> EdgeId {
        let id = EdgeId::from(self.edges.len());
        self.edges.push(Edge {
            id,
            source: u,
            target: v,
            cost,
            link,
        });
        self.links[link.index()].arcs.push(id);
        self.out_adj[u.index()].push(id);
        self.in_adj[v.index()].push(id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId::from)
    }

    pub fn position(&self, v: NodeId) -> Point {
        self.nodes[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn link(&self, l: LinkId) -> &Link {
        &self.links[l.index()]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_of(&self, e: EdgeId) -> &Link {
        self.link(self.edge(e).link)
    }

    /// Slices currently free on the arc's link.
    pub fn available(&self, e: EdgeId) -> &SliceSet {
        &self.link_of(e).available
    }

    /// Arcs leaving `v`, in ascending id order.
    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_adj[v.index()]
    }

    /// Arcs entering `v`, in ascending id order.
    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_adj[v.index()]
    }

    /// Number of link endpoints at `v`.
    pub fn degree(&self, v: NodeId) -> usize {
        self.links
            .iter()
            .map(|l| (l.endpoints.0 == v) as usize + (l.endpoints.1 == v) as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0; self.nodes.len()];
        for link in &self.links {
            degree[link.endpoints.0.index()] += 1;
            degree[link.endpoints.1.index()] += 1;
        }
        degree
    }

    pub fn path_cost(&self, path: &[EdgeId]) -> Cost {
        path.iter().map(|&e| self.edge(e).cost).sum()
    }

    /// Distinct links traversed by `path`, in first-use order.
    pub fn path_links(&self, path: &[EdgeId]) -> Vec<LinkId> {
        let mut links: Vec<LinkId> = Vec::with_capacity(path.len());
        for &e in path {
            let l = self.edge(e).link;
            if !links.contains(&l) {
                links.push(l);
            }
        }
        links
    }

    /// Intersection of the link pools along `path` (the full set for an empty path).
    pub fn path_slices(&self, path: &[EdgeId]) -> SliceSet {
        path.iter().fold(SliceSet::full(self.slices), |acc, &e| {
            acc.intersect(self.available(e))
        })
    }

    /// Marks `slot` as used on every link of `path`; all-or-nothing.
    pub fn allocate(&mut self, path: &[EdgeId], slot: Slot) -> Result<(), AllocationError> {
        self.update_links(path, |set| set.subtract(slot))
    }

    /// Returns `slot` to every link of `path`; all-or-nothing.
    pub fn release(&mut self, path: &[EdgeId], slot: Slot) -> Result<(), AllocationError> {
        self.update_links(path, |set| set.add(slot))
    }

    fn update_links<F>(&mut self, path: &[EdgeId], op: F) -> Result<(), AllocationError>
    where
        F: Fn(&SliceSet) -> Result<SliceSet, SpectrumError>,
    {
        if path.is_empty() {
            return Err(AllocationError::EmptyPath);
        }
        if let Some(&bad) = path.iter().find(|e| e.index() >= self.edges.len()) {
            return Err(AllocationError::UnknownEdge(bad));
        }
        let mut updated = Vec::new();
        for link in self.path_links(path) {
            let next = op(&self.links[link.index()].available)
                .map_err(|source| AllocationError::Inconsistent { link, source })?;
            updated.push((link, next));
        }
        for (link, next) in updated {
            self.links[link.index()].available = next;
        }
        Ok(())
    }

    /// Slices over all links, `Ω × |links|`.
    pub fn total_slices(&self) -> usize {
        self.slices * self.links.len()
    }

    pub fn available_slices(&self) -> usize {
        self.links.iter().map(|l| l.available.len()).sum()
    }

    pub fn used_slices(&self) -> usize {
        self.total_slices() - self.available_slices()
    }

    pub fn utilization(&self) -> f64 {
        if self.links.is_empty() {
            return 0.0;
        }
        self.used_slices() as f64 / self.total_slices() as f64
    }

    /// Mean number of free-spectrum fragments per link.
    pub fn mean_fragments(&self) -> f64 {
        if self.links.is_empty() {
            return 0.0;
        }
        let total: usize = self
            .links
            .iter()
            .map(|l| l.available.fragment_count())
            .sum();
        total as f64 / self.links.len() as f64
    }

    /// Resets every link to the full spectrum.
    pub fn clear_spectrum(&mut self) {
        for link in &mut self.links {
            link.available = SliceSet::full(self.slices);
        }
    }

    /// `true` if every node reaches every other node.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![NodeId(0)];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in self.out_edges(v) {
                let w = self.edge(e).target;
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks that `path` is a chain of arcs from `from` to `to`.
    pub fn is_walk(&self, path: &[EdgeId], from: NodeId, to: NodeId) -> bool {
        let mut at = from;
        for &e in path {
            if e.index() >= self.edges.len() || self.edge(e).source != at {
                return false;
            }
            at = self.edge(e).target;
        }
        !path.is_empty() && at == to
    }

    /// `true` if no node is visited twice along `path`.
    pub fn is_simple(&self, path: &[EdgeId]) -> bool {
        let Some(&first) = path.first() else {
            return true;
        };
        let mut seen = vec![false; self.nodes.len()];
        seen[self.edge(first).source.index()] = true;
        path.iter().all(|&e| {
            let t = self.edge(e).target.index();
            !std::mem::replace(&mut seen[t], true)
        })
    }
}
