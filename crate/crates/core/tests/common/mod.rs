//! Brute-force references shared by the integration suites.
#![allow(dead_code)]

use eonroute_core::baselines::CandidatePath;
use eonroute_core::{Cost, Demand, EdgeId, Multigraph, NodeId, SliceSet};
use rand::Rng;

/// Random small multigraph with random link spectra and a random demand.
pub fn random_instance<R: Rng>(rng: &mut R, slices: usize) -> (Multigraph, Demand) {
    let nodes = rng.random_range(2..=8);
    let links = rng.random_range(1..=12);
    let mut g = Multigraph::new(slices);
    let v = g.add_nodes(nodes);
    for _ in 0..links {
        let a = rng.random_range(0..nodes);
        let mut b = rng.random_range(0..nodes - 1);
        if b >= a {
            b += 1;
        }
        let cost = rng.random_range(1..=20);
        g.add_link(v[a], v[b], cost, random_set(rng, slices));
    }
    let s = rng.random_range(0..nodes);
    let mut t = rng.random_range(0..nodes - 1);
    if t >= s {
        t += 1;
    }
    let n = rng.random_range(1..=3);
    (g, Demand::new(v[s], v[t], n).unwrap())
}

/// Each slice free with probability 3/4.
pub fn random_set<R: Rng>(rng: &mut R, slices: usize) -> SliceSet {
    SliceSet::from_indices(slices, (0..slices).filter(|_| rng.random_bool(0.75))).unwrap()
}

/// Every simple path from `s` to `t`, sorted by cost then arc sequence.
pub fn all_simple_paths(g: &Multigraph, s: NodeId, t: NodeId) -> Vec<CandidatePath> {
    fn extend(
        g: &Multigraph,
        v: NodeId,
        t: NodeId,
        seen: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
        out: &mut Vec<CandidatePath>,
    ) {
        if v == t {
            out.push(CandidatePath {
                cost: g.path_cost(path),
                edges: path.clone(),
            });
            return;
        }
        for &e in g.out_edges(v) {
            let w = g.edge(e).target;
            if seen[w.index()] {
                continue;
            }
            seen[w.index()] = true;
            path.push(e);
            extend(g, w, t, seen, path, out);
            path.pop();
            seen[w.index()] = false;
        }
    }
    let mut out = Vec::new();
    let mut seen = vec![false; g.node_count()];
    seen[s.index()] = true;
    extend(g, s, t, &mut seen, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Naive common spectrum of a path: slices free on every arc, kept only
/// inside runs of at least `n`.
pub fn naive_sigma(g: &Multigraph, path: &[EdgeId], n: usize) -> SliceSet {
    let free: Vec<bool> = (0..g.slices())
        .map(|i| path.iter().all(|&e| g.available(e).contains(i)))
        .collect();
    let mut keep = Vec::new();
    let mut i = 0;
    while i < free.len() {
        if !free[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < free.len() && free[i] {
            i += 1;
        }
        if i - start >= n {
            keep.extend(start..i);
        }
    }
    SliceSet::from_indices(g.slices(), keep).unwrap()
}

/// Cheapest feasible simple path cost, by exhaustive enumeration.
pub fn brute_force_optimum(g: &Multigraph, d: &Demand, limit: Cost) -> Option<Cost> {
    all_simple_paths(g, d.source, d.target)
        .into_iter()
        .filter(|p| p.cost <= limit && !naive_sigma(g, &p.edges, d.slices).is_empty())
        .map(|p| p.cost)
        .min()
}

/// Maximal runs of `true` as `(start, len)`.
fn naive_runs(bits: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < bits.len() {
        if bits[i] {
            let start = i;
            while i < bits.len() && bits[i] {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    runs
}

fn from_bits(bits: &[bool]) -> SliceSet {
    SliceSet::from_indices(bits.len(), (0..bits.len()).filter(|&i| bits[i])).unwrap()
}

fn members(bits: &[bool]) -> Vec<usize> {
    (0..bits.len()).filter(|&i| bits[i]).collect()
}

fn trimmed(bits: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; bits.len()];
    for (start, len) in naive_runs(bits) {
        if len >= n {
            out[start..start + len].fill(true);
        }
    }
    out
}

/// Compares every slice-set operation on `a` and `b` (same length) with a
/// per-index evaluation. `slot` is `(start, len)` inside the universe.
pub fn check_slice_set_ops(
    a: &[bool],
    b: &[bool],
    n: usize,
    slot: (usize, usize),
) -> Result<(), String> {
    use eonroute_core::Slot;
    let universe = a.len();
    let (sa, sb) = (from_bits(a), from_bits(b));
    let both: Vec<bool> = a.iter().zip(b).map(|(x, y)| *x && *y).collect();
    let runs = naive_runs(a);
    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("{what}: a={sa} b={sb} n={n} slot={slot:?}"))
        }
    };

    check(sa.len() == members(a).len(), "len")?;
    check(sa.iter().collect::<Vec<_>>() == members(a), "iter")?;
    check((0..universe).all(|i| sa.contains(i) == a[i]), "contains")?;
    check(sa.intersect(&sb) == from_bits(&both), "intersect")?;
    let superset = (0..universe).all(|i| a[i] || !b[i]);
    check(sa.is_superset(&sb) == superset, "superset")?;
    check(sb.is_subset(&sa) == superset, "subset")?;
    let fragments: Vec<(usize, usize)> = sa.fragments().map(|f| (f.start, f.len)).collect();
    check(fragments == runs, "fragments")?;
    check(sa.fragment_count() == runs.len(), "fragment_count")?;
    check(
        sa.largest_fragment() == runs.iter().map(|r| r.1).max().unwrap_or(0),
        "largest",
    )?;
    if n > 0 {
        check(sa.supports(n) == runs.iter().any(|r| r.1 >= n), "supports")?;
        check(sa.trim(n) == from_bits(&trimmed(a, n)), "trim")?;
        check(
            sa.intersect_trim(&sb, n) == from_bits(&trimmed(&both, n)),
            "intersect_trim",
        )?;
    }
    check(sa.cmp(&sb) == members(a).cmp(&members(b)), "order")?;
    check(
        SliceSet::parse(&sa.to_string(), universe).as_ref() == Ok(&sa),
        "text round trip",
    )?;

    let (start, len) = slot;
    let s = Slot::new(start, len);
    let inside = start..start + len;
    let all_free = inside.clone().all(|i| a[i]);
    let none_free = inside.clone().all(|i| !a[i]);
    match sa.subtract(s) {
        Ok(out) => {
            let mut bits = a.to_vec();
            bits[inside.clone()].fill(false);
            check(all_free && out == from_bits(&bits), "subtract")?;
        }
        Err(_) => check(!all_free, "subtract rejected a free slot")?,
    }
    match sa.add(s) {
        Ok(out) => {
            let mut bits = a.to_vec();
            bits[inside].fill(true);
            check(none_free && out == from_bits(&bits), "add")?;
        }
        Err(_) => check(!none_free, "add rejected a used slot")?,
    }
    Ok(())
}

/// Random operands for [`check_slice_set_ops`], biased towards long runs.
pub fn random_operands<R: Rng>(rng: &mut R) -> (Vec<bool>, Vec<bool>, usize, (usize, usize)) {
    let universe = rng.random_range(1..=520);
    let bits = |rng: &mut R| {
        let stay = rng.random_range(0.5..0.98);
        let mut on = rng.random_bool(0.5);
        (0..universe)
            .map(|_| {
                if !rng.random_bool(stay) {
                    on = !on;
                }
                on
            })
            .collect::<Vec<bool>>()
    };
    let a = bits(rng);
    let b = bits(rng);
    let n = rng.random_range(0..=12);
    let len = rng.random_range(1..=universe.min(16));
    let start = rng.random_range(0..=universe - len);
    (a, b, n, (start, len))
}
