//! Simple undirected graphs on dense `0..n` vertex ids.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{math, Error, Result};

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Normalizes the endpoint order. Fails on a self-loop.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Edge(a, b)),
            core::cmp::Ordering::Greater => Ok(Edge(b, a)),
            core::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// True when the two edges share an endpoint.
    pub fn is_adjacent_to(&self, other: &Edge) -> bool {
        self.touches(other.0) || self.touches(other.1)
    }

    pub fn other(&self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

/// A simple undirected graph.
///
/// The edge list is sorted and duplicate-free; adjacency lists are sorted.
/// Values are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        Graph::with_vertex_count(raw.n, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.vertex_count, edges: g.edges.iter().map(|e| (e.0, e.1)).collect() }
    }
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(vertex_count: usize) -> Self {
        Graph { vertex_count, edges: Vec::new(), adjacency: vec![Vec::new(); vertex_count] }
    }

    /// Builds a graph from vertex pairs; the vertex count is `1 + max id`.
    /// Repeated pairs collapse to one edge.
    pub fn from_edge_list<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(None, pairs)
    }

    /// Like [`Graph::from_edge_list`] with an explicit vertex count, which must
    /// cover every id that appears.
    pub fn with_vertex_count<I>(vertex_count: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(Some(vertex_count), pairs)
    }

    fn build<I>(vertex_count: Option<usize>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        let mut max_id = None::<usize>;
        for (a, b) in pairs {
            set.insert(Edge::new(a, b)?);
            max_id = Some(max_id.map_or(a.max(b), |m| m.max(a).max(b)));
        }
        let n = match (vertex_count, max_id) {
            (Some(n), Some(m)) if m >= n => {
                return Err(Error::InvalidVertex { vertex: m, vertex_count: n })
            }
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => 0,
        };
        Ok(Self::from_sorted_edges(n, set.into_iter().collect()))
    }

    /// `edges` must be sorted, deduplicated and in range.
    pub(crate) fn from_sorted_edges(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for e in &edges {
            adjacency[e.0].push(e.1);
            adjacency[e.1].push(e.0);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { vertex_count, edges, adjacency }
    }

    /// Builds from edges that may be unsorted or repeated (already normalized).
    pub(crate) fn from_edges_unchecked(vertex_count: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_edges(vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of `edge` in [`Graph::edges`], if present.
    pub fn edge_index(&self, edge: Edge) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.vertex_count && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The degree sequence `d_1, ..., d_n` in vertex order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Subgraph induced by `set`, relabeled to `0..|set|` in sorted order.
    /// The second value maps new ids back to ids of `self`.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if let Some(&bad) = set.members().iter().find(|&&v| v >= self.vertex_count) {
            return Err(Error::InvalidVertex { vertex: bad, vertex_count: self.vertex_count });
        }
        Ok(self.induced_unchecked(set.members()))
    }

    /// `members` sorted, deduplicated and in range.
    pub(crate) fn induced_unchecked(&self, members: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.vertex_count];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in members {
            for &w in &self.adjacency[v] {
                if v < w && local[w] != usize::MAX {
                    edges.push(Edge(local[v], local[w]));
                }
            }
        }
        (Graph::from_sorted_edges(members.len(), edges), members.to_vec())
    }

    /// Connected components, largest first, ties broken by smallest member.
    pub fn components(&self) -> Vec<(Graph, VertexSet)> {
        self.component_sets()
            .into_iter()
            .map(|members| {
                let (g, _) = self.induced_unchecked(&members);
                (g, VertexSet(members))
            })
            .collect()
    }

    /// Vertex sets of the components in the canonical order of [`Graph::components`].
    pub fn component_sets(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for root in 0..self.vertex_count {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push(root);
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        // Roots are visited in increasing order, so a stable sort by size keeps
        // the min-id tie order.
        out.sort_by_key(|c| core::cmp::Reverse(c.len()));
        out
    }

    /// `sum_i d_i^t`. Exact integer arithmetic when `t` is a positive integer.
    pub fn degree_power_sum(&self, t: f64) -> Result<f64> {
        degree_power_sum(&self.degree_sequence(), t)
    }

    /// Removes the given edges; ids not present are ignored.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let drop: BTreeSet<Edge> = removed.iter().copied().collect();
        let edges = self.edges.iter().copied().filter(|e| !drop.contains(e)).collect();
        Graph::from_sorted_edges(self.vertex_count, edges)
    }
}

/// `sum d^t` over a degree list; see [`Graph::degree_power_sum`].
pub fn degree_power_sum(degrees: &[usize], t: f64) -> Result<f64> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("exponent t must be positive, got {t}")));
    }
    if t == math::floor(t) && t <= 64.0 {
        let k = t as u32;
        let mut acc: u128 = 0;
        let mut exact = true;
        for &d in degrees {
            match (d as u128).checked_pow(k).and_then(|p| acc.checked_add(p)) {
                Some(s) => acc = s,
                None => {
                    exact = false;
                    break;
                }
            }
        }
        if exact {
            return Ok(acc as f64);
        }
    }
    Ok(degrees.iter().map(|&d| math::powf(d as f64, t)).sum())
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Validates `members` against a host graph with `vertex_count` vertices.
    pub fn new(mut members: Vec<usize>, vertex_count: usize) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            let dup = members.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]).unwrap_or(0);
            return Err(Error::InvalidParameter(alloc::format!("duplicate vertex {dup} in set")));
        }
        if let Some(&bad) = members.last().filter(|&&v| v >= vertex_count) {
            return Err(Error::InvalidVertex { vertex: bad, vertex_count });
        }
        Ok(VertexSet(members))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}
