//! Exact crossing numbers of small graphs.
//!
//! `cr(G) <= k` iff some planarization with `k` crossings is planar: pick `k`
//! pairs of independent edges to cross, fix the order of the crossings along
//! every edge that is crossed more than once, replace each crossing by a
//! degree-4 dummy vertex and test the result for planarity. Searching `k`
//! upward and stopping at the first planar planarization yields the exact
//! value together with a certificate.
//!
//! Crossing pairs are taken from the non-adjacent edge pairs of the graph in
//! lexicographic order; multisets of pairs are enumerated in lexicographic
//! order and, for each, the per-edge crossing orders in lexicographic order
//! of their permutations. The first planar candidate is therefore the
//! lexicographically least certificate among those with the minimum count.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::generators::{classic, grid, Classic};
use crate::planarity::is_planar;
use crate::{Edge, Error, Graph, Result};

/// Largest supported `k_max`.
pub const MAX_K: usize = 4;

/// Default cap on planarity tests per search.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingValue {
    Exact(usize),
    /// No planarization with at most `k_max` crossings is planar.
    ExceedsKMax(usize),
}

impl CrossingValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            CrossingValue::Exact(v) => Some(v),
            CrossingValue::ExceedsKMax(_) => None,
        }
    }
}

impl fmt::Display for CrossingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingValue::Exact(v) => write!(f, "{v}"),
            CrossingValue::ExceedsKMax(k) => write!(f, "exceeds k_max = {k}"),
        }
    }
}

/// Serialized as an integer, or as the string `"exceeds k_max"`.
impl Serialize for CrossingValue {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            CrossingValue::Exact(v) => s.serialize_u64(*v as u64),
            CrossingValue::ExceedsKMax(_) => s.serialize_str("exceeds k_max"),
        }
    }
}

impl<'de> Deserialize<'de> for CrossingValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = CrossingValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a crossing count or \"exceeds k_max\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> core::result::Result<CrossingValue, E> {
                Ok(CrossingValue::Exact(v as usize))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> core::result::Result<CrossingValue, E> {
                if v == "exceeds k_max" {
                    Ok(CrossingValue::ExceedsKMax(0))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Order of the crossings along one edge, from `edge.0` to `edge.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrder {
    pub edge: Edge,
    /// Indices into [`Planarization::crossings`].
    pub crossings: Vec<usize>,
}

/// A combinatorial drawing: which edge pairs cross and in what order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planarization {
    pub base: Graph,
    /// Crossing `i` becomes dummy vertex `base.vertex_count() + i`.
    pub crossings: Vec<(Edge, Edge)>,
    /// Only edges with at least one crossing appear.
    pub edge_orders: Vec<EdgeOrder>,
    pub derived_graph: Graph,
}

impl Planarization {
    /// Builds the derived graph from the crossing list and per-edge orders.
    pub fn new(base: Graph, crossings: Vec<(Edge, Edge)>, edge_orders: Vec<EdgeOrder>) -> Self {
        let derived_graph = derive(&base, crossings.len(), &edge_orders);
        Planarization { base, crossings, edge_orders, derived_graph }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Re-checks every certificate invariant from scratch.
    pub fn verify(&self) -> bool {
        let pairs_ok = self.crossings.iter().all(|(e, f)| {
            !e.is_adjacent_to(f) && self.base.edge_index(*e).is_some() && self.base.edge_index(*f).is_some()
        });
        // Each crossing must appear exactly once on each of its two edges.
        let mut seen = vec![0usize; self.crossings.len()];
        let orders_ok = self.edge_orders.iter().all(|o| {
            o.crossings.iter().all(|&c| {
                c < self.crossings.len() && {
                    let (e, f) = self.crossings[c];
                    seen[c] += 1;
                    o.edge == e || o.edge == f
                }
            })
        });
        pairs_ok
            && orders_ok
            && seen.iter().all(|&s| s == 2)
            && derive(&self.base, self.crossings.len(), &self.edge_orders) == self.derived_graph
            && is_planar(&self.derived_graph)
    }
}

fn derive(base: &Graph, crossing_count: usize, orders: &[EdgeOrder]) -> Graph {
    let n = base.vertex_count();
    let mut edges = Vec::with_capacity(base.edge_count() + 2 * crossing_count);
    let mut oi = 0;
    for e in base.edges() {
        while oi < orders.len() && orders[oi].edge < *e {
            oi += 1;
        }
        if oi < orders.len() && orders[oi].edge == *e {
            let mut prev = e.0;
            for &c in &orders[oi].crossings {
                let d = n + c;
                edges.push(Edge(prev.min(d), prev.max(d)));
                prev = d;
            }
            edges.push(Edge(prev.min(e.1), prev.max(e.1)));
        } else {
            edges.push(*e);
        }
    }
    // Parallel edges (from a pair crossing twice) do not affect planarity.
    Graph::from_edges_unchecked(n + crossing_count, edges)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub planarity_tests: u64,
    /// Crossing counts ruled out by `e + 2k > 3(n + k) - 6` without testing.
    pub levels_skipped: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingResult {
    pub value: CrossingValue,
    pub certificate: Option<Planarization>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub k_max: usize,
    pub budget: u64,
}

impl SearchOptions {
    pub fn new(k_max: usize) -> Self {
        SearchOptions { k_max, budget: DEFAULT_BUDGET }
    }
}

/// Exact crossing number if it is at most `k_max`.
pub fn exact_crossing_number(g: &Graph, k_max: usize) -> Result<CrossingResult> {
    exact_crossing_number_with(g, SearchOptions::new(k_max))
}

pub fn exact_crossing_number_with(g: &Graph, opts: SearchOptions) -> Result<CrossingResult> {
    if opts.k_max > MAX_K {
        return Err(Error::KMaxTooLarge(opts.k_max));
    }
    let edges = g.edges();
    let candidates: Vec<(usize, usize)> = (0..edges.len())
        .flat_map(|i| (i + 1..edges.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !edges[i].is_adjacent_to(&edges[j]))
        .collect();
    let mut stats = SearchStats::default();
    let (n, m) = (g.vertex_count(), g.edge_count());

    for k in 0..=opts.k_max {
        if n + k >= 3 && m + 2 * k > 3 * (n + k) - 6 {
            stats.levels_skipped += 1;
            continue;
        }
        if k > 0 && candidates.is_empty() {
            break;
        }
        let mut chosen = vec![0usize; k];
        loop {
            if let Some(cert) = try_multiset(g, &candidates, &chosen, &mut stats, opts.budget)? {
                return Ok(CrossingResult {
                    value: CrossingValue::Exact(k),
                    certificate: Some(cert),
                    stats,
                });
            }
            if !next_multiset(&mut chosen, candidates.len()) {
                break;
            }
        }
    }
    Ok(CrossingResult { value: CrossingValue::ExceedsKMax(opts.k_max), certificate: None, stats })
}

/// Advances a nondecreasing index sequence; false when exhausted.
fn next_multiset(chosen: &mut [usize], universe: usize) -> bool {
    let k = chosen.len();
    for pos in (0..k).rev() {
        if chosen[pos] + 1 < universe {
            let v = chosen[pos] + 1;
            for slot in &mut chosen[pos..] {
                *slot = v;
            }
            return true;
        }
    }
    false
}

fn try_multiset(
    g: &Graph,
    candidates: &[(usize, usize)],
    chosen: &[usize],
    stats: &mut SearchStats,
    budget: u64,
) -> Result<Option<Planarization>> {
    let edges = g.edges();
    let crossings: Vec<(Edge, Edge)> = chosen
        .iter()
        .map(|&c| (edges[candidates[c].0], edges[candidates[c].1]))
        .collect();

    // Crossing indices per crossed edge, edges in canonical order.
    let mut per_edge: Vec<(usize, Vec<usize>)> = Vec::new();
    for (ci, &c) in chosen.iter().enumerate() {
        for ei in [candidates[c].0, candidates[c].1] {
            match per_edge.iter_mut().find(|(e, _)| *e == ei) {
                Some((_, list)) => list.push(ci),
                None => per_edge.push((ei, vec![ci])),
            }
        }
    }
    per_edge.sort_by_key(|(e, _)| *e);
    let perms: Vec<Vec<Vec<usize>>> = per_edge.iter().map(|(_, l)| permutations(l)).collect();
    let mut odometer = vec![0usize; perms.len()];

    loop {
        if stats.planarity_tests >= budget {
            return Err(Error::SearchBudgetExceeded { tests: stats.planarity_tests, budget });
        }
        let orders: Vec<EdgeOrder> = per_edge
            .iter()
            .zip(&perms)
            .zip(&odometer)
            .map(|(((ei, _), p), &idx)| EdgeOrder { edge: edges[*ei], crossings: p[idx].clone() })
            .collect();
        let derived = derive(g, crossings.len(), &orders);
        stats.planarity_tests += 1;
        if is_planar(&derived) {
            return Ok(Some(Planarization {
                base: g.clone(),
                crossings,
                edge_orders: orders,
                derived_graph: derived,
            }));
        }
        // Last position varies fastest, giving lexicographic order.
        let mut pos = perms.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < perms[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// All permutations of a sorted list, in lexicographic order.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut current = items.to_vec();
    current.sort_unstable();
    let mut out = vec![current.clone()];
    loop {
        // Standard next-permutation.
        let Some(i) = (0..current.len().saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
        else {
            return out;
        };
        let j = (i + 1..current.len()).rev().find(|&j| current[j] > current[i]).expect("pivot");
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// A named graph with its crossing number.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: alloc::string::String,
    pub graph: Graph,
    pub crossing_number: usize,
}

/// Small graphs with known crossing numbers, each reproducible by
/// [`exact_crossing_number`] with `k_max <= 4`.
pub fn fixture_registry() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = [
        (Classic::Complete(4), 0),
        (Classic::Complete(5), 1),
        (Classic::CompleteBipartite(3, 3), 1),
        (Classic::CompleteBipartite(3, 4), 2),
        (Classic::Petersen, 2),
        (Classic::Complete(6), 3),
    ]
    .into_iter()
    .map(|(c, cr)| Fixture { name: format!("{c}"), graph: classic(c), crossing_number: cr })
    .collect();
    for n in 2..=4 {
        let (g, _) = grid(n).expect("n >= 2");
        out.push(Fixture { name: format!("grid{n}"), graph: g, crossing_number: 0 });
    }
    out
}
