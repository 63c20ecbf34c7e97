//! Vertex splitting and the level-by-level bisection decomposition.
//!
//! [`split_high_degree`] replaces every vertex of degree above `d = 2e/n` by
//! `ceil(deg/d)` copies, handing neighbor `j` (1-based, in the chosen order)
//! to copy `ceil(j/d)`. The first copy keeps the vertex's id; further copies
//! get fresh ids `n, n+1, ..` in vertex order.
//!
//! [`decompose`] then bisects, level by level, every piece of the split graph
//! that is large for its level, until `(2/3)^i` drops below the stopping
//! threshold. Single vertices are atomic: they are never large and the size
//! bounds do not apply to them. All ids in a trace are split-graph ids.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bisection::{exact_bisection, heuristic_bisection, min_part, Exactness, DEFAULT_EXACT_CAP};
use crate::crossing::exact_crossing_number;
use crate::drawing::Drawing;
use crate::geometry::{self, Point, Rational};
use crate::{math, Edge, Error, Graph, Result};

/// Relative tolerance of the floating comparisons in [`verify_trace`].
const TOL: f64 = 1e-9;

/// Hard stop for runaway level counts (tiny thresholds).
pub const MAX_LEVELS: usize = 10_000;

/// A graph and its high-degree split.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitResult {
    pub original: Graph,
    pub split_graph: Graph,
    /// `2e/n`.
    pub d_bar: Ratio<i64>,
    /// `groups[v]`: the split vertices replacing `v`, first copy first.
    pub groups: Vec<Vec<usize>>,
    /// For every split vertex, the original neighbors it received.
    pub neighbor_assignment: Vec<Vec<usize>>,
    /// For every split vertex, the original vertex it came from.
    pub owner: Vec<usize>,
}

impl SplitResult {
    /// `ceil(2e/n)`.
    pub fn degree_cap(&self) -> usize {
        ceil_div(*self.d_bar.numer() as u128, *self.d_bar.denom() as u128) as usize
    }

    /// Maps every split edge back to its owners.
    pub fn contract(&self) -> Graph {
        let edges = self
            .split_graph
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (self.owner[e.0], self.owner[e.1]);
                Edge(a.min(b), a.max(b))
            })
            .collect();
        Graph::from_edges_unchecked(self.original.vertex_count(), edges)
    }

    /// Names of the violated split invariants; empty when all hold.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let g = &self.original;
        let (n, e) = (g.vertex_count(), g.edge_count());
        let big_n = self.split_graph.vertex_count();
        if self.split_graph.edge_count() != e {
            out.push(format!("edge count {} != {e}", self.split_graph.edge_count()));
        }
        if self.split_graph.max_degree() > self.degree_cap() {
            out.push(format!("degree {} above cap {}", self.split_graph.max_degree(), self.degree_cap()));
        }
        if big_n < n || big_n >= 2 * n {
            out.push(format!("N = {big_n} outside [{n}, {})", 2 * n));
        }
        for v in 0..n {
            let want = group_count(g.degree(v), n, e);
            if self.groups[v].len() != want {
                out.push(format!("vertex {v}: {} copies, expected {want}", self.groups[v].len()));
            }
        }
        let contracted = self.contract();
        if contracted != *g || contracted.edge_count() != e {
            out.push(String::from("contraction differs from the original"));
        }
        out
    }
}

fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// Number of copies of a vertex of degree `deg`: `ceil(deg n / 2e)` when
/// `deg > 2e/n`, else 1.
fn group_count(deg: usize, n: usize, e: usize) -> usize {
    let (num, den) = (deg as u128 * n as u128, 2 * e as u128);
    if num > den {
        ceil_div(num, den) as usize
    } else {
        1
    }
}

/// Splits with neighbors taken in ascending id order.
pub fn split_high_degree(g: &Graph) -> Result<SplitResult> {
    let orders: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect();
    split_with_orders(g, &orders)
}

fn split_with_orders(g: &Graph, orders: &[Vec<usize>]) -> Result<SplitResult> {
    let (n, e) = (g.vertex_count(), g.edge_count());
    if e == 0 {
        return Err(Error::EmptyGraph);
    }
    let two_e = 2 * e as u128;
    let mut groups = Vec::with_capacity(n);
    let mut owner: Vec<usize> = (0..n).collect();
    let mut neighbor_assignment: Vec<Vec<usize>> = vec![Vec::new(); n];
    // slot[v]: (neighbor, split id) sorted by neighbor.
    let mut slot: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    let mut next_id = n;
    for (v, order) in orders.iter().enumerate() {
        let count = group_count(g.degree(v), n, e);
        let mut ids = vec![v];
        for _ in 1..count {
            ids.push(next_id);
            owner.push(v);
            neighbor_assignment.push(Vec::new());
            next_id += 1;
        }
        let mut map = Vec::with_capacity(order.len());
        for (j0, &w) in order.iter().enumerate() {
            let group = if count == 1 {
                0
            } else {
                ceil_div((j0 as u128 + 1) * n as u128, two_e) as usize - 1
            };
            let id = ids[group];
            neighbor_assignment[id].push(w);
            map.push((w, id));
        }
        map.sort_unstable();
        slot.push(map);
        groups.push(ids);
    }
    let lookup = |v: usize, w: usize| -> usize {
        let i = slot[v].binary_search_by_key(&w, |&(x, _)| x).expect("neighbor has a slot");
        slot[v][i].1
    };
    let edges = g
        .edges()
        .iter()
        .map(|ed| {
            let (a, b) = (lookup(ed.0, ed.1), lookup(ed.1, ed.0));
            Edge(a.min(b), a.max(b))
        })
        .collect();
    Ok(SplitResult {
        original: g.clone(),
        split_graph: Graph::from_edges_unchecked(next_id, edges),
        d_bar: Ratio::new(2 * e as i64, n as i64),
        groups,
        neighbor_assignment,
        owner,
    })
}

/// A split computed from a drawing, with the split drawn in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct DrawnSplit {
    pub split: SplitResult,
    pub drawing: Drawing,
    pub crossings_before: u64,
    /// `None` when the split drawing is not in general position.
    pub crossings_after: Option<u64>,
}

impl DrawnSplit {
    pub fn adds_no_crossings(&self) -> bool {
        self.crossings_after.is_some_and(|c| c <= self.crossings_before)
    }
}

/// Splits using the clockwise order of neighbors around each vertex.
///
/// Each copy of a split vertex `v` is placed a short step from `v` towards
/// the middle neighbor of its group.
pub fn split_drawing(d: &Drawing) -> Result<DrawnSplit> {
    let g = d.host();
    let crossings_before = d.count_crossings()?;
    let lattice = geometry::to_lattice(d.coordinates())?;
    let mut orders = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let mut dirs = Vec::with_capacity(g.degree(v));
        for &w in g.neighbors(v) {
            dirs.push((geometry::direction(lattice[v], lattice[w])?, w));
        }
        let mut err = None;
        dirs.sort_by(|a, b| match geometry::clockwise_cmp(a.0, b.0) {
            Ok(Ordering::Equal) => a.1.cmp(&b.1),
            Ok(o) => o,
            Err(e) => {
                err = Some(e);
                Ordering::Equal
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        orders.push(dirs.into_iter().map(|(_, w)| w).collect::<Vec<_>>());
    }
    let split = split_with_orders(g, &orders)?;

    let scale = lattice_scale(d.coordinates());
    let extent = lattice.iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap_or(0) + 1;
    let mut coords: Vec<Point> = Vec::with_capacity(split.split_graph.vertex_count());
    for (id, &v) in split.owner.iter().enumerate() {
        let received = &split.neighbor_assignment[id];
        if split.groups[v].len() == 1 || received.is_empty() {
            coords.push(if id < g.vertex_count() {
                d.coordinates()[v]
            } else {
                offset_point(lattice[v], (1, 0), scale, extent, id as i128)?
            });
            continue;
        }
        let w = received[received.len() / 2];
        let dir = geometry::direction(lattice[v], lattice[w])?;
        coords.push(offset_point(lattice[v], dir, scale, extent, 1)?);
    }
    let drawing = Drawing::new(split.split_graph.clone(), coords)?;
    let crossings_after = drawing.count_crossings().ok();
    Ok(DrawnSplit { split, drawing, crossings_before, crossings_after })
}

fn lattice_scale(points: &[Point]) -> i128 {
    use num_integer::Integer;
    points
        .iter()
        .flat_map(|p| [*p.x.denom() as i128, *p.y.denom() as i128])
        .fold(1, |l, d| l.lcm(&d))
}

/// `(v + dir / (8 extent |dir|_1 k)) / scale` as a rational point.
fn offset_point(v: geometry::LatticePoint, dir: (i128, i128), scale: i128, extent: i128, k: i128) -> Result<Point> {
    let l1 = dir.0.abs() + dir.1.abs();
    let den = 8i128
        .checked_mul(extent)
        .and_then(|x| x.checked_mul(l1))
        .and_then(|x| x.checked_mul(k))
        .ok_or(Error::CoordinateOverflow)?;
    let coord = |base: i128, step: i128| -> Result<Rational> {
        let num = base.checked_mul(den).and_then(|x| x.checked_add(step)).ok_or(Error::CoordinateOverflow)?;
        let full_den = den.checked_mul(scale).ok_or(Error::CoordinateOverflow)?;
        let g = num_integer::gcd(num, full_den);
        let (p, q) = (num / g, full_den / g);
        match (i64::try_from(p), i64::try_from(q)) {
            (Ok(p), Ok(q)) => Ok(Ratio::new(p, q)),
            _ => Err(Error::CoordinateOverflow),
        }
    };
    Ok(Point::new(coord(v.x, dir.0)?, coord(v.y, dir.1)?))
}

/// How pieces are bisected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BisectorPolicy {
    /// Exhaustive search only; larger pieces are an error.
    ExactOnly { cap: usize },
    /// Exhaustive up to `cap` vertices, local search beyond.
    Auto { cap: usize, seed: u64 },
}

impl Default for BisectorPolicy {
    fn default() -> Self {
        BisectorPolicy::ExactOnly { cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub n: usize,
    pub e: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub d_bar: f64,
    /// `d_bar` exactly, as `2e / n`.
    pub d_bar_exact: (u64, u64),
    pub groups: Vec<Vec<usize>>,
    pub original_edges: Vec<Edge>,
    pub split_edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub threshold: f64,
    pub policy: BisectorPolicy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub n: usize,
    pub e: usize,
    pub ids: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionRecord {
    /// Index into the level's component list.
    pub component: usize,
    pub width: usize,
    pub exactness: Exactness,
    pub part_one: Vec<usize>,
    pub cut_edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub i: usize,
    #[serde(rename = "M_i")]
    pub big_m: usize,
    pub m_i: usize,
    pub components: Vec<ComponentSummary>,
    pub deleted: usize,
    pub bisections: Vec<BisectionRecord>,
}

/// Recorded when the loop stops at level 0: the threshold exceeds 1, so
/// `e > 2A N^(1+alpha)` and the sparsity hypothesis fails for the graph itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisViolation {
    pub e: usize,
    pub n: usize,
    pub threshold: f64,
    /// `2A n^(1+alpha)`.
    pub edge_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTrace {
    pub split: SplitSummary,
    pub params: TraceParams,
    pub levels: Vec<LevelRecord>,
    pub k: usize,
    pub sigma: usize,
    pub final_edge_count: usize,
    /// Original vertices behind each final component.
    pub preimages: Vec<Vec<usize>>,
    pub hypothesis_violation: Option<HypothesisViolation>,
}

impl DecompositionTrace {
    /// True when every cut came from the exhaustive bisector.
    pub fn all_exact(&self) -> bool {
        self.levels.iter().flat_map(|l| &l.bisections).all(|b| b.exactness == Exactness::Exact)
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

/// `(2A)^(-1/alpha) e^(1/alpha) / N^(1+1/alpha)`.
pub fn stopping_threshold(big_n: usize, e: usize, a: f64, alpha: f64) -> Result<f64> {
    check_positive("A", a)?;
    check_positive("alpha", alpha)?;
    if big_n == 0 || e == 0 {
        return Err(Error::InvalidParameter(format!("need N, e >= 1, got N = {big_n}, e = {e}")));
    }
    let inv = 1.0 / alpha;
    let direct = math::powf(2.0 * a, -inv) * math::powf(e as f64, inv) / math::powf(big_n as f64, 1.0 + inv);
    if direct.is_finite() && direct > 0.0 {
        return Ok(direct);
    }
    Ok(math::exp(inv * (math::ln(e as f64) - math::ln(2.0 * a)) - (1.0 + inv) * math::ln(big_n as f64)))
}

/// The loop keeps going at level `i` iff `(2/3)^i >= threshold`.
fn continues(i: usize, threshold: f64) -> bool {
    math::powi(2.0 / 3.0, i as u32) >= threshold
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingLevel {
    pub k: usize,
    pub threshold: f64,
    /// Threshold above 1: no level runs and `k = 0`.
    pub degenerate: bool,
}

/// The unique `k >= 1` with `(2/3)^k < threshold <= (2/3)^(k-1)`, from the
/// logarithm and then corrected against the loop's own comparison.
pub fn stopping_level(big_n: usize, e: usize, a: f64, alpha: f64) -> Result<StoppingLevel> {
    let threshold = stopping_threshold(big_n, e, a, alpha)?;
    if !continues(0, threshold) {
        return Ok(StoppingLevel { k: 0, threshold, degenerate: true });
    }
    let guess = math::floor(math::ln(threshold) / math::ln(2.0 / 3.0)) + 1.0;
    let mut k = if guess.is_finite() && guess >= 1.0 { guess as usize } else { 1 };
    while continues(k, threshold) {
        k += 1;
    }
    while k > 1 && !continues(k - 1, threshold) {
        k -= 1;
    }
    Ok(StoppingLevel { k, threshold, degenerate: false })
}

/// The same level found by stepping `i` upward.
pub fn stopping_level_by_iteration(big_n: usize, e: usize, a: f64, alpha: f64) -> Result<StoppingLevel> {
    let threshold = stopping_threshold(big_n, e, a, alpha)?;
    let mut k = 0;
    while continues(k, threshold) {
        k += 1;
    }
    Ok(StoppingLevel { k, threshold, degenerate: k == 0 })
}

/// Compares `n 3^i` with `big_n 2^i`, i.e. `n` with `(2/3)^i N`.
fn cmp_scaled(n: usize, big_n: usize, i: usize) -> Ordering {
    let exact = u32::try_from(i).ok().and_then(|i| {
        let lhs = 3u128.checked_pow(i)?.checked_mul(n as u128)?;
        let rhs = 2u128.checked_pow(i)?.checked_mul(big_n as u128)?;
        Some(lhs.cmp(&rhs))
    });
    exact.unwrap_or_else(|| {
        let bound = math::exp(i as f64 * math::ln(2.0 / 3.0)) * big_n as f64;
        (n as f64).partial_cmp(&bound).unwrap_or(Ordering::Equal)
    })
}

/// Large at level `i`: at least two vertices and `n >= (2/3)^(i+1) N`.
fn is_large(n: usize, big_n: usize, i: usize) -> bool {
    n >= 2 && cmp_scaled(n, big_n, i + 1) != Ordering::Less
}

/// Runs the split and the bisection loop, recording everything.
pub fn decompose(g: &Graph, a: f64, alpha: f64, policy: BisectorPolicy) -> Result<DecompositionTrace> {
    let split = split_high_degree(g)?;
    decompose_split(&split, a, alpha, policy)
}

/// [`decompose`] on a precomputed split.
pub fn decompose_split(split: &SplitResult, a: f64, alpha: f64, policy: BisectorPolicy) -> Result<DecompositionTrace> {
    let gp = &split.split_graph;
    let (n, e, big_n) = (split.original.vertex_count(), split.original.edge_count(), gp.vertex_count());
    let threshold = stopping_threshold(big_n, e, a, alpha)?;
    let mut pieces: Vec<Vec<usize>> = vec![(0..big_n).collect()];
    let mut levels: Vec<LevelRecord> = Vec::new();
    let mut sigma = 0;
    let k = loop {
        let i = levels.len();
        if i > MAX_LEVELS {
            return Err(Error::InvalidParameter(format!(
                "threshold {threshold} needs more than {MAX_LEVELS} levels"
            )));
        }
        pieces.sort_by(|p, q| q.len().cmp(&p.len()).then_with(|| p.cmp(q)));
        let m_i = pieces.iter().take_while(|p| is_large(p.len(), big_n, i)).count();
        let mut record = LevelRecord {
            i,
            big_m: pieces.len(),
            m_i,
            components: pieces
                .iter()
                .map(|p| ComponentSummary { n: p.len(), e: gp.induced_unchecked(p).0.edge_count(), ids: p.clone() })
                .collect(),
            deleted: 0,
            bisections: Vec::new(),
        };
        if !continues(i, threshold) {
            levels.push(record);
            break i;
        }
        let mut next = Vec::with_capacity(pieces.len() + m_i);
        for (j, piece) in pieces.iter().enumerate().take(m_i) {
            let (sub, map) = gp.induced_unchecked(piece);
            let b = match policy {
                BisectorPolicy::ExactOnly { cap } => {
                    if piece.len() > cap {
                        return Err(Error::BisectorCapExceeded { n: piece.len(), cap });
                    }
                    exact_bisection(&sub, cap)?
                }
                BisectorPolicy::Auto { cap, seed } => {
                    if piece.len() <= cap {
                        exact_bisection(&sub, cap)?
                    } else {
                        heuristic_bisection(&sub, mix_seed(seed, i, j))?
                    }
                }
            };
            let part_one: Vec<usize> = b.part_one.members().iter().map(|&v| map[v]).collect();
            let part_two: Vec<usize> = b.part_two.members().iter().map(|&v| map[v]).collect();
            let cut_edges: Vec<Edge> = b.cut_edges.iter().map(|c| Edge(map[c.0], map[c.1])).collect();
            record.deleted += b.width;
            record.bisections.push(BisectionRecord {
                component: j,
                width: b.width,
                exactness: b.exactness,
                part_one: part_one.clone(),
                cut_edges,
            });
            next.push(part_one);
            next.push(part_two);
        }
        next.extend(pieces.drain(m_i..));
        sigma += record.deleted;
        levels.push(record);
        pieces = next;
    };
    let last = levels.last().expect("at least one level");
    let final_edge_count = last.components.iter().map(|c| c.e).sum();
    let preimages = last.components.iter().map(|c| preimage(&split.owner, &c.ids)).collect();
    let hypothesis_violation = (k == 0).then(|| HypothesisViolation {
        e,
        n,
        threshold,
        edge_bound: 2.0 * a * math::powf(n as f64, 1.0 + alpha),
    });
    Ok(DecompositionTrace {
        split: SplitSummary {
            n,
            e,
            big_n,
            d_bar: 2.0 * e as f64 / n as f64,
            d_bar_exact: (2 * e as u64, n as u64),
            groups: split.groups.clone(),
            original_edges: split.original.edges().to_vec(),
            split_edges: gp.edges().to_vec(),
        },
        params: TraceParams { a, alpha, threshold, policy },
        levels,
        k,
        sigma,
        final_edge_count,
        preimages,
        hypothesis_violation,
    })
}

fn mix_seed(seed: u64, level: usize, component: usize) -> u64 {
    seed ^ ((level as u64) << 32 | component as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn preimage(owner: &[usize], ids: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = ids.iter().map(|&u| owner[u]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    /// Witness on failure, reason when skipped.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceVerdict {
    pub checks: Vec<CheckOutcome>,
}

impl TraceVerdict {
    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
}

/// Names of the checks, in report order.
pub const CHECK_NAMES: [&str; 9] = [
    "structure",
    "a_size_bound",
    "b_classification",
    "c_large_count",
    "d_stopping_bracket",
    "e_accounting",
    "f_preimage_bound",
    "g_edge_halving",
    "h_crossing_budget",
];

/// Exact crossing numbers for the split graph and for every bisected
/// component, `per_level[i][j]` for `j < m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCrossings {
    pub split_graph: usize,
    pub per_level: Vec<Vec<usize>>,
}

/// Computes [`TraceCrossings`] with the exact oracle; `None` when some graph
/// exceeds `k_max` or the trace is malformed.
pub fn trace_crossings(trace: &DecompositionTrace, k_max: usize) -> Result<Option<TraceCrossings>> {
    let Ok(gp) = Graph::with_vertex_count(trace.split.big_n, trace.split.split_edges.iter().map(|e| (e.0, e.1)))
    else {
        return Ok(None);
    };
    let Some(split_graph) = exact_crossing_number(&gp, k_max)?.value.exact() else {
        return Ok(None);
    };
    let mut per_level = Vec::with_capacity(trace.levels.len());
    for level in &trace.levels {
        let mut row = Vec::with_capacity(level.m_i);
        for c in level.components.iter().take(level.m_i) {
            if c.ids.iter().any(|&v| v >= gp.vertex_count()) || !is_sorted_unique(&c.ids) {
                return Ok(None);
            }
            let (sub, _) = gp.induced_unchecked(&c.ids);
            match exact_crossing_number(&sub, k_max)?.value.exact() {
                Some(v) => row.push(v),
                None => return Ok(None),
            }
        }
        per_level.push(row);
    }
    Ok(Some(TraceCrossings { split_graph, per_level }))
}

fn is_sorted_unique(ids: &[usize]) -> bool {
    ids.windows(2).all(|w| w[0] < w[1])
}

struct Checker {
    checks: Vec<CheckOutcome>,
}

impl Checker {
    fn record(&mut self, name: &str, failure: Option<String>) {
        let (status, detail) = match failure {
            None => (CheckStatus::Pass, String::new()),
            Some(w) => (CheckStatus::Fail, w),
        };
        self.checks.push(CheckOutcome { name: String::from(name), status, detail });
    }

    fn skip(&mut self, name: &str, reason: String) {
        self.checks.push(CheckOutcome { name: String::from(name), status: CheckStatus::Skipped, detail: reason });
    }
}

/// First failure among a sequence of `Option<String>` producers.
macro_rules! first_failure {
    ($($check:expr),* $(,)?) => {{
        let mut out: Option<String> = None;
        $( if out.is_none() { out = $check; } )*
        out
    }};
}

/// Re-checks a trace from its recorded data alone.
///
/// `crossings` feeds the per-level crossing budget; without it, or when
/// any cut was not exact, that check is skipped.
pub fn verify_trace(trace: &DecompositionTrace, crossings: Option<&TraceCrossings>) -> TraceVerdict {
    let mut ck = Checker { checks: Vec::new() };
    let parsed = match parse_structure(trace) {
        Ok(p) => p,
        Err(w) => {
            ck.record("structure", Some(w));
            for name in &CHECK_NAMES[1..] {
                ck.record(name, Some(String::from("not evaluated: malformed trace")));
            }
            return TraceVerdict { checks: ck.checks };
        }
    };
    ck.record("structure", None);
    let big_n = trace.split.big_n;

    // (a)
    let mut a_fail = None;
    'a: for l in &trace.levels {
        for (j, c) in l.components.iter().enumerate() {
            if c.n >= 2 && cmp_scaled(c.n, big_n, l.i) == Ordering::Greater {
                a_fail = Some(format!(
                    "level {}, component {j}: {} vertices > (2/3)^{} * {big_n} = {:.6}",
                    l.i,
                    c.n,
                    l.i,
                    math::powi(2.0 / 3.0, l.i as u32) * big_n as f64
                ));
                break 'a;
            }
        }
    }
    ck.record("a_size_bound", a_fail);

    // (b)
    let mut b_fail = None;
    'b: for l in &trace.levels {
        if l.big_m != l.components.len() || l.m_i > l.big_m {
            b_fail = Some(format!("level {}: M_i = {} with {} components, m_i = {}", l.i, l.big_m, l.components.len(), l.m_i));
            break;
        }
        for (j, c) in l.components.iter().enumerate() {
            let large = j < l.m_i;
            let ok = if large {
                is_large(c.n, big_n, l.i) && cmp_scaled(c.n, big_n, l.i) != Ordering::Greater
            } else {
                c.n == 1 || cmp_scaled(c.n, big_n, l.i + 1) == Ordering::Less
            };
            if !ok {
                let class = if large { "large" } else { "small" };
                b_fail = Some(format!("level {}, component {j} ({} vertices) misclassified as {class}", l.i, c.n));
                break 'b;
            }
        }
        let want = if l.i < trace.k { l.m_i } else { 0 };
        let bisected: Vec<usize> = l.bisections.iter().map(|b| b.component).collect();
        if bisected != (0..want).collect::<Vec<_>>() {
            b_fail = Some(format!("level {}: bisected components {bisected:?}, expected the first {want}", l.i));
            break;
        }
    }
    ck.record("b_classification", b_fail);

    // (c)
    let mut c_fail = None;
    for l in &trace.levels {
        let within = match (3u128.checked_pow(l.i as u32 + 1), 2u128.checked_pow(l.i as u32 + 1)) {
            (Some(p3), Some(p2)) => (l.m_i as u128).saturating_mul(p2) <= p3,
            _ => true,
        };
        if !within {
            c_fail = Some(format!(
                "i={}: m_i = {} > bound {}",
                l.i,
                l.m_i,
                math::powi(1.5, l.i as u32 + 1)
            ));
            break;
        }
    }
    ck.record("c_large_count", c_fail);

    // (d)
    let d_fail = match stopping_threshold(big_n, trace.split.e, trace.params.a, trace.params.alpha) {
        Err(e) => Some(format!("threshold undefined: {e}")),
        Ok(t) => {
            let k = trace.k;
            if trace.levels.len() != k + 1 {
                Some(format!("{} levels recorded for k = {k}", trace.levels.len()))
            } else if continues(k, t) {
                Some(format!("(2/3)^{k} = {} >= threshold {t}", math::powi(2.0 / 3.0, k as u32)))
            } else if k > 0 && !continues(k - 1, t) {
                Some(format!("threshold {t} > (2/3)^{} = {}", k - 1, math::powi(2.0 / 3.0, k as u32 - 1)))
            } else {
                None
            }
        }
    };
    ck.record("d_stopping_bracket", d_fail);

    // (e)
    ck.record("e_accounting", accounting_failure(trace, &parsed));

    // (f)
    let mut f_fail = None;
    let last = &trace.levels[trace.levels.len() - 1];
    if trace.preimages.len() != last.components.len() {
        f_fail = Some(format!("{} preimages for {} final components", trace.preimages.len(), last.components.len()));
    }
    for (j, c) in last.components.iter().enumerate() {
        if f_fail.is_some() {
            break;
        }
        let v = preimage(&parsed.owner, &c.ids);
        if v != trace.preimages[j] {
            f_fail = Some(format!("component {j}: recorded preimage differs from {v:?}"));
        } else if v.len() > c.n {
            f_fail = Some(format!("component {j}: |V_j| = {} > {}", v.len(), c.n));
        }
    }
    ck.record("f_preimage_bound", f_fail);

    // (g)
    let (a, alpha) = (trace.params.a, trace.params.alpha);
    let mut violated = None;
    for (j, v) in trace.preimages.iter().enumerate() {
        let (sub, _) = parsed.original.induced_unchecked(v);
        let bound = a * math::powf(v.len() as f64, 1.0 + alpha);
        if sub.edge_count() as f64 > bound {
            violated = Some(format!("hypothesis fails on V_{j}: e = {} > {bound:.6}", sub.edge_count()));
            break;
        }
    }
    match violated {
        Some(reason) => ck.skip("g_edge_halving", reason),
        None => {
            let e = trace.split.e;
            ck.record(
                "g_edge_halving",
                (2 * trace.final_edge_count >= e)
                    .then(|| format!("final edge count {} >= e/2 = {}", trace.final_edge_count, e as f64 / 2.0)),
            );
        }
    }

    // (h)
    match (trace.all_exact(), crossings) {
        (false, _) => ck.skip("h_crossing_budget", String::from("some cuts came from the heuristic bisector")),
        (true, None) => ck.skip("h_crossing_budget", String::from("exact crossing numbers not supplied")),
        (true, Some(cr)) => ck.record("h_crossing_budget", crossing_budget_failure(trace, cr)),
    }
    TraceVerdict { checks: ck.checks }
}

struct Parsed {
    original: Graph,
    split_graph: Graph,
    owner: Vec<usize>,
}

fn parse_structure(trace: &DecompositionTrace) -> core::result::Result<Parsed, String> {
    let s = &trace.split;
    let pairs = |edges: &[Edge]| edges.iter().map(|e| (e.0, e.1)).collect::<Vec<_>>();
    let original = Graph::with_vertex_count(s.n, pairs(&s.original_edges)).map_err(|e| format!("original graph: {e}"))?;
    let split_graph = Graph::with_vertex_count(s.big_n, pairs(&s.split_edges)).map_err(|e| format!("split graph: {e}"))?;
    if original.edge_count() != s.e || original.edge_count() != s.original_edges.len() {
        return Err(format!("original edge list does not match e = {}", s.e));
    }
    if s.groups.len() != s.n {
        return Err(format!("{} groups for {} vertices", s.groups.len(), s.n));
    }
    let mut owner = vec![usize::MAX; s.big_n];
    for (v, ids) in s.groups.iter().enumerate() {
        for &u in ids {
            if u >= s.big_n || owner[u] != usize::MAX {
                return Err(format!("group of {v} lists {u} out of range or twice"));
            }
            owner[u] = v;
        }
    }
    if let Some(u) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(format!("split vertex {u} belongs to no group"));
    }
    if trace.levels.is_empty() {
        return Err(String::from("no levels recorded"));
    }
    for (i, l) in trace.levels.iter().enumerate() {
        if l.i != i {
            return Err(format!("level {i} labelled {}", l.i));
        }
        for c in &l.components {
            if c.ids.len() != c.n || !is_sorted_unique(&c.ids) || c.ids.iter().any(|&u| u >= s.big_n) {
                return Err(format!("level {i}: malformed component ids"));
            }
        }
        for b in &l.bisections {
            if b.component >= l.components.len() {
                return Err(format!("level {i}: bisection of missing component {}", b.component));
            }
        }
    }
    Ok(Parsed { original, split_graph, owner })
}

fn accounting_failure(trace: &DecompositionTrace, parsed: &Parsed) -> Option<String> {
    let gp = &parsed.split_graph;
    let level_sum: usize = trace.levels.iter().map(|l| l.deleted).sum();
    let last = &trace.levels[trace.levels.len() - 1];
    let final_sum: usize = last.components.iter().map(|c| c.e).sum();
    first_failure!(
        (trace.sigma != level_sum).then(|| format!("sigma {} != sum of level deletions {level_sum}", trace.sigma)),
        (trace.final_edge_count != final_sum)
            .then(|| format!("final edge count {} != sum over final components {final_sum}", trace.final_edge_count)),
        (trace.sigma + trace.final_edge_count != gp.edge_count()).then(|| format!(
            "sigma {} + final {} != e(G') = {}",
            trace.sigma,
            trace.final_edge_count,
            gp.edge_count()
        )),
        trace.levels.iter().find_map(|l| level_accounting(l, gp)),
        trace.levels.windows(2).find_map(|w| transition_failure(&w[0], &w[1])),
    )
}

fn level_accounting(l: &LevelRecord, gp: &Graph) -> Option<String> {
    let widths: usize = l.bisections.iter().map(|b| b.width).sum();
    if widths != l.deleted {
        return Some(format!("level {}: deleted {} != sum of widths {widths}", l.i, l.deleted));
    }
    for (j, c) in l.components.iter().enumerate() {
        let actual = gp.induced_unchecked(&c.ids).0.edge_count();
        if actual != c.e {
            return Some(format!("level {}, component {j}: recorded e = {} but G' induces {actual}", l.i, c.e));
        }
    }
    for b in &l.bisections {
        let comp = &l.components[b.component];
        let mut inside = vec![false; gp.vertex_count()];
        for &u in &b.part_one {
            inside[u] = true;
        }
        let in_comp = |u: usize| comp.ids.binary_search(&u).is_ok();
        let one = b.part_one.len();
        let lo = min_part(comp.n);
        if !is_sorted_unique(&b.part_one) || b.part_one.iter().any(|&u| !in_comp(u)) || one < lo || comp.n - one < lo {
            return Some(format!("level {}, component {}: part one is not a balanced subset", l.i, b.component));
        }
        let cut: Vec<Edge> = gp
            .edges()
            .iter()
            .copied()
            .filter(|e| in_comp(e.0) && in_comp(e.1) && inside[e.0] != inside[e.1])
            .collect();
        if cut != b.cut_edges || cut.len() != b.width {
            return Some(format!("level {}, component {}: cut edges do not match the parts", l.i, b.component));
        }
    }
    None
}

/// Level `i+1` must consist of both sides of every cut plus the untouched pieces.
fn transition_failure(cur: &LevelRecord, next: &LevelRecord) -> Option<String> {
    let mut expected: Vec<Vec<usize>> = Vec::new();
    let mut cut_pieces = vec![false; cur.components.len()];
    for b in &cur.bisections {
        cut_pieces[b.component] = true;
        let ids = &cur.components[b.component].ids;
        expected.push(b.part_one.clone());
        expected.push(ids.iter().copied().filter(|u| b.part_one.binary_search(u).is_err()).collect());
    }
    for (j, c) in cur.components.iter().enumerate() {
        if !cut_pieces[j] {
            expected.push(c.ids.clone());
        }
    }
    let mut actual: Vec<Vec<usize>> = next.components.iter().map(|c| c.ids.clone()).collect();
    expected.sort();
    actual.sort();
    if expected != actual {
        return Some(format!("level {} components are not the pieces left by level {}", next.i, cur.i));
    }
    let before: usize = cur.components.iter().map(|c| c.e).sum();
    let after: usize = next.components.iter().map(|c| c.e).sum();
    (before != after + cur.deleted)
        .then(|| format!("level {}: {before} edges - {} deleted != {after} at level {}", cur.i, cur.deleted, next.i))
}

fn crossing_budget_failure(trace: &DecompositionTrace, cr: &TraceCrossings) -> Option<String> {
    for l in trace.levels.iter().take(trace.k) {
        let Some(row) = cr.per_level.get(l.i).filter(|r| r.len() == l.m_i) else {
            return Some(format!("level {}: crossing values missing", l.i));
        };
        let lhs: f64 = row.iter().map(|&c| math::sqrt(c as f64)).sum();
        let rhs = math::sqrt(math::powi(1.5, l.i as u32 + 1) * cr.split_graph as f64);
        if !math::le_tol(lhs, rhs, TOL) {
            return Some(format!("level {}: sum of sqrt(cr) = {lhs:.6} > {rhs:.6}", l.i));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{classic, grid, random_graph, Classic};
    use proptest::prelude::*;

    const HALF: f64 = 0.5;

    fn exact() -> BisectorPolicy {
        BisectorPolicy::ExactOnly { cap: 24 }
    }

    #[test]
    fn split_examples() {
        let star = classic(Classic::Star(9));
        let s = split_high_degree(&star).unwrap();
        assert_eq!(s.d_bar, Ratio::new(9, 5));
        let sizes: Vec<usize> = s.groups[0].iter().map(|&u| s.neighbor_assignment[u].len()).collect();
        assert_eq!(sizes, [1, 2, 2, 2, 2]);
        assert_eq!(s.split_graph.vertex_count(), 14);
        assert!(s.invariant_failures().is_empty());

        let k4 = classic(Classic::Complete(4));
        let s = split_high_degree(&k4).unwrap();
        assert_eq!(s.split_graph, k4);
        assert!(s.groups.iter().all(|g| g.len() == 1));

        let g5 = grid(5).unwrap().0;
        let s = split_high_degree(&g5).unwrap();
        assert_eq!(s.split_graph.vertex_count(), 34);
        assert_eq!(s.degree_cap(), 4);
        assert_eq!(s.split_graph.max_degree(), 3);
        assert!(s.invariant_failures().is_empty());

        assert_eq!(split_high_degree(&Graph::empty(3)), Err(Error::EmptyGraph));
    }

    #[test]
    fn sparse_split_keeps_empty_copies() {
        // d = 0.4: a degree-1 vertex gets ceil(2.5) = 3 copies, two of them isolated.
        let g = Graph::with_vertex_count(10, [(0, 1), (2, 3)]).unwrap();
        let s = split_high_degree(&g).unwrap();
        assert_eq!(s.groups[0].len(), 3);
        assert_eq!(s.split_graph.vertex_count(), 18);
        assert!(s.invariant_failures().is_empty());
    }

    #[test]
    fn drawn_split_of_grid() {
        let (_, d) = grid(4).unwrap();
        let ds = split_drawing(&d).unwrap();
        assert!(ds.split.invariant_failures().is_empty());
        assert_eq!(ds.crossings_before, 0);
        assert!(ds.adds_no_crossings(), "{:?}", ds.crossings_after);
        // Around an interior vertex the clockwise order from +x is right, down, left, up.
        let v = 5; // point (2, 2)
        let order: Vec<usize> = ds.split.groups[v].iter().flat_map(|&u| ds.split.neighbor_assignment[u].clone()).collect();
        assert_eq!(order, [9, 4, 1, 6]);
    }

    #[test]
    fn stopping_examples() {
        assert_eq!(stopping_level(1000, 3000, HALF, 1.0).unwrap().k, 15);
        assert_eq!(stopping_level(34, 40, HALF, 1.0).unwrap().k, 9);
        assert_eq!(stopping_level(4, 6, HALF, 1.0).unwrap().k, 3);
        let deg = stopping_level(2, 10, HALF, 1.0).unwrap();
        assert!(deg.degenerate && deg.k == 0);
    }

    #[test]
    fn k4_hand_run() {
        let t = decompose(&classic(Classic::Complete(4)), HALF, 1.0, exact()).unwrap();
        assert_eq!((t.k, t.sigma, t.final_edge_count), (3, 6, 0));
        let deleted: Vec<usize> = t.levels.iter().map(|l| l.deleted).collect();
        assert_eq!(deleted, [4, 2, 0, 0]);
        let m: Vec<usize> = t.levels.iter().map(|l| l.m_i).collect();
        assert_eq!(m, [1, 2, 0, 0]);
        assert!((t.params.threshold - 0.375).abs() < 1e-15);
        let v = verify_trace(&t, None);
        for name in &CHECK_NAMES[..8] {
            assert_eq!(v.status(name), Some(CheckStatus::Pass), "{name}: {:?}", v);
        }
        assert_eq!(v.status("h_crossing_budget"), Some(CheckStatus::Skipped));
        let cr = trace_crossings(&t, 2).unwrap().unwrap();
        assert_eq!(verify_trace(&t, Some(&cr)).status("h_crossing_budget"), Some(CheckStatus::Pass));
    }

    #[test]
    fn grid5_trace() {
        let t = decompose(&grid(5).unwrap().0, HALF, 1.0, BisectorPolicy::Auto { cap: 25, seed: 0 }).unwrap();
        assert_eq!(t.split.big_n, 34);
        assert_eq!(t.k, 9);
        let v = verify_trace(&t, None);
        assert!(!v.has_failures(), "{v:?}");
        assert_eq!(v.status("g_edge_halving"), Some(CheckStatus::Pass));
    }

    #[test]
    fn exact_policy_cap() {
        let err = decompose(&grid(5).unwrap().0, HALF, 1.0, exact()).unwrap_err();
        assert_eq!(err, Error::BisectorCapExceeded { n: 34, cap: 24 });
        let t = decompose(&grid(5).unwrap().0, HALF, 1.0, BisectorPolicy::Auto { cap: 24, seed: 7 }).unwrap();
        assert!(!t.all_exact());
        let v = verify_trace(&t, None);
        assert!(!v.has_failures(), "{v:?}");
        assert_eq!(v.status("h_crossing_budget"), Some(CheckStatus::Skipped));
    }

    #[test]
    fn dense_graph_reports_hypothesis_violation() {
        let t = decompose(&classic(Classic::Complete(8)), 0.01, 1.0, exact()).unwrap();
        assert_eq!(t.k, 0);
        assert!(t.hypothesis_violation.is_some());
        assert_eq!(t.sigma, 0);
    }

    #[test]
    fn forged_traces_fail() {
        let t = decompose(&classic(Classic::Complete(4)), HALF, 1.0, exact()).unwrap();
        let mut forged = t.clone();
        forged.levels[0].m_i = 100;
        let v = verify_trace(&forged, None);
        let c = v.checks.iter().find(|c| c.name == "c_large_count").unwrap();
        assert_eq!(c.status, CheckStatus::Fail);
        assert!(c.detail.contains("i=0") && c.detail.contains("bound 1.5"), "{}", c.detail);

        let mut forged = t.clone();
        forged.sigma = 5;
        assert_eq!(verify_trace(&forged, None).status("e_accounting"), Some(CheckStatus::Fail));

        // A singleton marked large at level 2.
        let mut forged = t.clone();
        forged.levels[2].m_i = 1;
        assert_eq!(verify_trace(&forged, None).status("b_classification"), Some(CheckStatus::Fail));

        let mut forged = t;
        forged.split.groups[0].push(99);
        let v = verify_trace(&forged, None);
        assert_eq!(v.status("structure"), Some(CheckStatus::Fail));
        assert!(v.has_failures());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn split_invariants(n in 1usize..30, p in 0.0f64..1.0, seed in 0u64..100_000) {
            let g = random_graph(n, p, seed).unwrap();
            if g.edge_count() == 0 {
                prop_assert_eq!(split_high_degree(&g), Err(Error::EmptyGraph));
            } else {
                let s = split_high_degree(&g).unwrap();
                prop_assert!(s.invariant_failures().is_empty(), "{:?}", s.invariant_failures());
            }
        }

        #[test]
        fn decompose_passes_verification(n in 2usize..14, p in 0.1f64..0.9, seed in 0u64..100_000, alpha in 0.5f64..2.0) {
            let g = random_graph(n, p, seed).unwrap();
            prop_assume!(g.edge_count() > 0);
            let t = decompose(&g, HALF, alpha, BisectorPolicy::ExactOnly { cap: 30 }).unwrap();
            let again = decompose(&g, HALF, alpha, BisectorPolicy::ExactOnly { cap: 30 }).unwrap();
            prop_assert_eq!(&t, &again);
            let v = verify_trace(&t, None);
            for name in &CHECK_NAMES[..7] {
                prop_assert_eq!(v.status(name), Some(CheckStatus::Pass), "{} {:?}", name, v);
            }
            prop_assert_ne!(v.status("g_edge_halving"), Some(CheckStatus::Fail));
        }

        #[test]
        fn closed_form_matches_iteration(big_n in 1usize..100_000, e in 1usize..1_000_000, a in 0.01f64..10.0, alpha in 0.05f64..4.0) {
            let closed = stopping_level(big_n, e, a, alpha).unwrap();
            let iter = stopping_level_by_iteration(big_n, e, a, alpha).unwrap();
            prop_assert_eq!(closed, iter);
        }
    }
}
