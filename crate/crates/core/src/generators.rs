//! Graph constructions: the unit-distance grid, the complete-bipartite
//! blow-up, a handful of classic graphs and seeded random graphs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::drawing::Drawing;
use crate::geometry::Point;
use crate::{Edge, Error, Graph, Result};

/// The `n x n` grid graph on the integer points `(i, j)`, `1 <= i, j <= n`,
/// with edges between points at distance one, together with that drawing.
///
/// Vertex `(i, j)` gets id `(i - 1) * n + (j - 1)` and is drawn at `(i, j)`.
pub fn grid(n: usize) -> Result<(Graph, Drawing)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("grid side must be at least 2, got {n}")));
    }
    let id = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let mut edges = Vec::with_capacity(2 * n * (n - 1));
    let mut coords = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            coords.push(Point::from_integers(i as i64, j as i64));
            if j < n {
                edges.push(Edge(id(i, j), id(i, j + 1)));
            }
            if i < n {
                edges.push(Edge(id(i, j), id(i + 1, j)));
            }
        }
    }
    let g = Graph::from_edges_unchecked(n * n, edges);
    let d = Drawing::new(g.clone(), coords)?;
    Ok((g, d))
}

/// Edges of `base` to replace by `K_{s,s}` gadgets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub base: Graph,
    pub selected_edges: Vec<Edge>,
    pub s: usize,
}

impl BlowupSpec {
    pub fn new(base: Graph, selected_edges: Vec<Edge>, s: usize) -> Result<Self> {
        if s < 3 {
            return Err(Error::InvalidParameter(format!("blow-up size s must be >= 3, got {s}")));
        }
        if let Some(e) = selected_edges.iter().find(|e| base.edge_index(**e).is_none()) {
            return Err(Error::InvalidParameter(format!("edge {}-{} not in base graph", e.0, e.1)));
        }
        Ok(BlowupSpec { base, selected_edges, s })
    }

    /// Selects the first `m` edges of `base` in canonical order.
    pub fn first_edges(base: Graph, m: usize, s: usize) -> Result<Self> {
        if m > base.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "cannot select {m} of {} edges",
                base.edge_count()
            )));
        }
        let selected = base.edges()[..m].to_vec();
        Self::new(base, selected, s)
    }

    /// Endpoints of the selected edges.
    pub fn blown_vertices(&self) -> BTreeSet<usize> {
        self.selected_edges.iter().flat_map(|e| [e.0, e.1]).collect()
    }

    /// `(vertices, edges)` of the blow-up, counted from the base graph alone.
    pub fn expected_size(&self) -> (usize, usize) {
        let blown = self.blown_vertices();
        let s = self.s;
        let vertices = self.base.vertex_count() - blown.len() + s * blown.len();
        let edges = self
            .base
            .edges()
            .iter()
            .map(|e| match (blown.contains(&e.0), blown.contains(&e.1)) {
                (false, false) => 1,
                (true, true) => s * s,
                _ => s,
            })
            .sum();
        (vertices, edges)
    }
}

/// Replaces every endpoint `v` of a selected edge by an independent set `I_v`
/// of size `s`; `I_v` inherits every edge of `v`, becoming complete bipartite
/// to `I_u` when `u` is replaced too.
///
/// Vertices are numbered in base order, each `I_v` occupying `s` consecutive ids.
pub fn blowup(spec: &BlowupSpec) -> Graph {
    let blown = spec.blown_vertices();
    let s = spec.s;
    let n = spec.base.vertex_count();
    let mut first = Vec::with_capacity(n);
    let mut next = 0;
    for v in 0..n {
        first.push(next);
        next += if blown.contains(&v) { s } else { 1 };
    }
    let copies = |v: usize| {
        let k = if blown.contains(&v) { s } else { 1 };
        first[v]..first[v] + k
    };
    let mut edges = Vec::new();
    for e in spec.base.edges() {
        for a in copies(e.0) {
            for b in copies(e.1) {
                edges.push(Edge(a, b));
            }
        }
    }
    Graph::from_edges_unchecked(next, edges)
}

/// Named graphs with canonical numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classic {
    /// `K_n`.
    Complete(usize),
    /// `K_{s,t}`: parts `0..s` and `s..s+t`.
    CompleteBipartite(usize, usize),
    /// Path on `n` vertices `0 - 1 - ... - (n-1)`.
    Path(usize),
    /// Cycle on `n >= 3` vertices.
    Cycle(usize),
    /// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i - (i+5)`.
    Petersen,
    /// `K_{1,k}` with centre 0.
    Star(usize),
}

pub fn classic(which: Classic) -> Graph {
    let mut edges = Vec::new();
    let n = match which {
        Classic::Complete(n) => {
            for a in 0..n {
                for b in a + 1..n {
                    edges.push(Edge(a, b));
                }
            }
            n
        }
        Classic::CompleteBipartite(s, t) => {
            for a in 0..s {
                for b in s..s + t {
                    edges.push(Edge(a, b));
                }
            }
            s + t
        }
        Classic::Path(n) => {
            edges.extend((1..n).map(|v| Edge(v - 1, v)));
            n
        }
        Classic::Cycle(n) => {
            edges.extend((1..n).map(|v| Edge(v - 1, v)));
            if n >= 3 {
                edges.push(Edge(0, n - 1));
            }
            n
        }
        Classic::Petersen => {
            for i in 0..5 {
                let (a, b) = (i, (i + 1) % 5);
                edges.push(Edge(a.min(b), a.max(b)));
                let (c, d) = (5 + i, 5 + (i + 2) % 5);
                edges.push(Edge(c.min(d), c.max(d)));
                edges.push(Edge(i, i + 5));
            }
            10
        }
        Classic::Star(k) => {
            edges.extend((1..=k).map(|v| Edge(0, v)));
            k + 1
        }
    };
    Graph::from_edges_unchecked(n, edges)
}

impl fmt::Display for Classic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classic::Complete(n) => write!(f, "K{n}"),
            Classic::CompleteBipartite(s, t) => write!(f, "K{s},{t}"),
            Classic::Path(n) => write!(f, "path{n}"),
            Classic::Cycle(n) => write!(f, "cycle{n}"),
            Classic::Petersen => f.write_str("petersen"),
            Classic::Star(k) => write!(f, "star{k}"),
        }
    }
}

/// Accepts `K5`, `K3,3`, `K_{3,4}`, `path4`, `cycle6` (or `C6`), `star9`, `petersen`.
/// A `:` between name and size is allowed (`path:4`).
impl FromStr for Classic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownGraph(s.to_string());
        let clean: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '{' | '}' | ':' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let num = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        if clean == "petersen" {
            return Ok(Classic::Petersen);
        }
        for (prefix, make) in [
            ("path", Classic::Path as fn(usize) -> Classic),
            ("cycle", Classic::Cycle),
            ("star", Classic::Star),
            ("c", Classic::Cycle),
        ] {
            if let Some(rest) = clean.strip_prefix(prefix) {
                return Ok(make(num(rest)?));
            }
        }
        if let Some(rest) = clean.strip_prefix('k') {
            return match rest.split_once(',') {
                Some((a, b)) => Ok(Classic::CompleteBipartite(num(a)?, num(b)?)),
                None => Ok(Classic::Complete(num(rest)?)),
            };
        }
        Err(unknown())
    }
}

/// Erdős–Rényi `G(n, p)`.
///
/// A `ChaCha8` stream seeded with `seed` draws one uniform `f64` in `[0, 1)`
/// per pair `(u, v)`, `u < v`, in lexicographic order; the pair becomes an
/// edge when the draw is below `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push(Edge(u, v));
            }
        }
    }
    Ok(Graph::from_sorted_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::is_planar;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn grids() {
        let (c4, _) = grid(2).unwrap();
        assert_eq!(c4, Graph::from_edge_list([(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        let (g5, d5) = grid(5).unwrap();
        assert_eq!((g5.vertex_count(), g5.edge_count(), g5.max_degree()), (25, 40, 4));
        assert_eq!(d5.count_crossings().unwrap(), 0);
        assert!(matches!(grid(1), Err(Error::InvalidParameter(_))));
        for n in 2..8 {
            assert_eq!(grid(n).unwrap().0.edge_count(), 2 * n * (n - 1));
        }
    }

    #[test]
    fn blowup_examples() {
        let k2 = classic(Classic::Complete(2));
        let spec = BlowupSpec::new(k2, vec![Edge(0, 1)], 3).unwrap();
        let g = blowup(&spec);
        assert_eq!(g, classic(Classic::CompleteBipartite(3, 3)));
        assert!(!is_planar(&g));

        let p3 = classic(Classic::Path(3));
        let g = blowup(&BlowupSpec::new(p3, vec![Edge(0, 1)], 3).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 12));
        // vertex 2 of the base becomes id 6, joined to all of I_1 = {3, 4, 5}
        assert_eq!(g.neighbors(6), &[3, 4, 5]);

        let (g5, _) = grid(5).unwrap();
        let spec = BlowupSpec::first_edges(g5, 1, 3).unwrap();
        let g = blowup(&spec);
        assert_eq!(g.vertex_count(), 29);
        assert!(!is_planar(&g));

        let k2 = classic(Classic::Complete(2));
        assert!(BlowupSpec::new(k2.clone(), vec![Edge(0, 1)], 2).is_err());
        assert!(BlowupSpec::new(k2, vec![Edge(0, 2)], 3).is_err());
    }

    #[test]
    fn classics() {
        let k5 = classic(Classic::Complete(5));
        assert_eq!((k5.vertex_count(), k5.edge_count()), (5, 10));
        let p = classic(Classic::Petersen);
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.degree_sequence().iter().all(|&d| d == 3));
        let c6 = classic(Classic::Cycle(6));
        assert_eq!(c6.edge_count(), 6);
        assert!(c6.degree_sequence().iter().all(|&d| d == 2));
    }

    #[test]
    fn classic_names_parse() {
        assert_eq!("K5".parse::<Classic>().unwrap(), Classic::Complete(5));
        assert_eq!("K_{3,4}".parse::<Classic>().unwrap(), Classic::CompleteBipartite(3, 4));
        assert_eq!("k3,3".parse::<Classic>().unwrap(), Classic::CompleteBipartite(3, 3));
        assert_eq!("cycle:6".parse::<Classic>().unwrap(), Classic::Cycle(6));
        assert_eq!("C6".parse::<Classic>().unwrap(), Classic::Cycle(6));
        assert_eq!("star9".parse::<Classic>().unwrap(), Classic::Star(9));
        assert_eq!("Petersen".parse::<Classic>().unwrap(), Classic::Petersen);
        assert!(matches!("dodecahedron".parse::<Classic>(), Err(Error::UnknownGraph(_))));
        for c in [Classic::Complete(6), Classic::CompleteBipartite(2, 5), Classic::Path(4)] {
            assert_eq!(c.to_string().parse::<Classic>().unwrap(), c);
        }
    }

    #[test]
    fn random_graph_extremes_and_reproducibility() {
        assert_eq!(random_graph(12, 0.0, 3).unwrap().edge_count(), 0);
        assert_eq!(random_graph(12, 1.0, 3).unwrap(), classic(Classic::Complete(12)));
        let a = random_graph(20, 0.3, 7).unwrap();
        let b = random_graph(20, 0.3, 7).unwrap();
        assert_eq!(a, b);
        assert!(random_graph(5, 1.5, 0).is_err());
    }

    proptest! {
        #[test]
        fn blowup_size_matches_formula(
            n in 2usize..12, p in 0.2f64..0.9, seed in 0u64..1000, m in 1usize..4, s in 3usize..6
        ) {
            let base = random_graph(n, p, seed).unwrap();
            prop_assume!(base.edge_count() >= m);
            let spec = BlowupSpec::first_edges(base, m, s).unwrap();
            let g = blowup(&spec);
            prop_assert_eq!((g.vertex_count(), g.edge_count()), spec.expected_size());
            prop_assert!(!is_planar(&g));
        }
    }
}
