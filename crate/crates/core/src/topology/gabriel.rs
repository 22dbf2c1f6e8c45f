use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cost, Multigraph, NodeId, Point};
use crate::spectrum::SliceSet;

/// Parameters of a random Gabriel topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GabrielParams {
    pub nodes: usize,
    /// Extent of the placement area in km.
    pub width: f64,
    pub height: f64,
    /// Slices per link.
    pub slices: usize,
}

impl Default for GabrielParams {
    fn default() -> Self {
        GabrielParams {
            nodes: 100,
            width: 1000.0,
            height: 1000.0,
            slices: 400,
        }
    }
}

/// Places nodes uniformly at random and joins them by the Gabriel rule.
///
/// Link costs are Euclidean distances rounded to whole kilometres, at least 1.
/// Every link starts with its full spectrum available.
pub fn gabriel_generate<R: Rng + ?Sized>(params: &GabrielParams, rng: &mut R) -> Multigraph {
    assert!(
        params.nodes >= 2,
        "a Gabriel graph needs at least two nodes"
    );
    assert!(params.width > 0.0 && params.height > 0.0);
    let mut points: Vec<Point> = Vec::with_capacity(params.nodes);
    while points.len() < params.nodes {
        let p = Point::new(
            rng.random::<f64>() * params.width,
            rng.random::<f64>() * params.height,
        );
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let g = gabriel_graph(&points, params.slices);
    assert!(g.is_connected(), "Gabriel graph must be connected");
    g
}

/// Seeded convenience wrapper over [`gabriel_generate`].
pub fn gabriel_seeded(params: &GabrielParams, seed: u64) -> Multigraph {
    gabriel_generate(params, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Gabriel graph over fixed points.
///
/// `u` and `v` are joined iff no third point lies in or on the circle with
/// diameter `uv`. A point `w` is in that closed disk exactly when the angle
/// `u w v` is at least 90 degrees, i.e. `(u - w) . (v - w) <= 0`.
pub fn gabriel_graph(points: &[Point], slices: usize) -> Multigraph {
    let mut g = Multigraph::new(slices);
    for &p in points {
        g.add_node(p);
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (u, v) = (points[i], points[j]);
            let blocked = points.iter().enumerate().any(|(k, w)| {
                k != i && k != j && (u.x - w.x) * (v.x - w.x) + (u.y - w.y) * (v.y - w.y) <= 0.0
            });
            if !blocked {
                let cost = (u.distance(&v).round() as Cost).max(1);
                g.add_link(
                    NodeId::from(i),
                    NodeId::from(j),
                    cost,
                    SliceSet::full(slices),
                );
            }
        }
    }
    g
}
