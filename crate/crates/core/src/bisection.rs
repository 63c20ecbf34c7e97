//! Bisection width: exact enumeration, a local-search upper bound, and the
//! inequalities relating `b(G)` to crossings and degree norms.
//!
//! A bisection splits `V` into two parts of at least `ceil(n/3)` vertices
//! each. `part_one` always holds vertex 0.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::degree_power_sum;
use crate::{math, Edge, Error, Graph, Result, VertexSet};

/// Default vertex cap for [`exact_bisection`].
pub const DEFAULT_EXACT_CAP: usize = 24;

/// Hard limit of the bitmask enumeration.
const MAX_EXACT_N: usize = 63;

/// Coefficient of `sqrt(cr)` in the bisection inequality.
pub const PSS_CR_COEFF: f64 = 6.32;
/// Coefficient of `sqrt(sum d_i^2)` in the bisection inequality.
pub const PSS_DEGREE_COEFF: f64 = 1.58;

/// Absolute slack (after scaling by `max(1, |rhs|)`) for floating comparisons.
pub const COMPARE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    HeuristicUpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bisection {
    pub part_one: VertexSet,
    pub part_two: VertexSet,
    pub cut_edges: Vec<Edge>,
    pub width: usize,
    pub exactness: Exactness,
}

/// Smallest allowed part size, `ceil(n/3)`.
pub fn min_part(n: usize) -> usize {
    n.div_ceil(3)
}

impl Bisection {
    /// Builds a bisection of `g` from the side containing vertex 0.
    pub fn from_part(g: &Graph, part_one: &[usize], exactness: Exactness) -> Result<Self> {
        let n = g.vertex_count();
        let one = VertexSet::new(part_one.to_vec(), n)?;
        let mut inside = vec![false; n];
        for &v in one.members() {
            inside[v] = true;
        }
        let two = VertexSet::from_sorted((0..n).filter(|&v| !inside[v]).collect());
        let cut_edges: Vec<Edge> =
            g.edges().iter().copied().filter(|e| inside[e.0] != inside[e.1]).collect();
        let b = Bisection { width: cut_edges.len(), part_one: one, part_two: two, cut_edges, exactness };
        b.check_balance(n)?;
        Ok(b)
    }

    fn check_balance(&self, n: usize) -> Result<()> {
        let lo = min_part(n);
        if self.part_one.len() < lo || self.part_two.len() < lo {
            return Err(Error::InvalidParameter(format!(
                "unbalanced bisection: parts of {} and {} vertices, each needs >= {lo}",
                self.part_one.len(),
                self.part_two.len()
            )));
        }
        Ok(())
    }

    /// True when the parts partition `g`, are balanced, and the stored cut
    /// matches the parts.
    pub fn is_consistent_with(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        let mut all: Vec<usize> =
            self.part_one.members().iter().chain(self.part_two.members()).copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() || self.check_balance(n).is_err() {
            return false;
        }
        match Bisection::from_part(g, self.part_one.members(), self.exactness) {
            Ok(b) => b.cut_edges == self.cut_edges && b.width == self.width,
            Err(_) => false,
        }
    }
}

/// Minimum-width bisection by enumerating every balanced vertex subset
/// containing vertex 0. Ties go to the lexicographically least `part_one`.
pub fn exact_bisection(g: &Graph, cap: usize) -> Result<Bisection> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Undefined(n));
    }
    if n > cap.min(MAX_EXACT_N) {
        return Err(Error::TooLarge { n, cap: cap.min(MAX_EXACT_N) });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w))).collect();
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let lo = min_part(n);
    let hi = n - lo;

    // Gray-code walk over subsets of {1, .., n-1}; vertex 0 is always in S.
    let mut set: u64 = 1;
    let mut size = 1usize;
    let mut cut = deg[0] as i64;
    let mut best: Option<(i64, u64)> = None;
    let consider = |set: u64, size: usize, cut: i64, best: &mut Option<(i64, u64)>| {
        if size < lo || size > hi {
            return;
        }
        match *best {
            Some((w, s)) if cut > w || (cut == w && !lex_less(set, s)) => {}
            _ => *best = Some((cut, set)),
        }
    };
    consider(set, size, cut, &mut best);
    let free = n - 1;
    for i in 1u64..(1u64 << free) {
        let v = i.trailing_zeros() as usize + 1;
        let bit = 1u64 << v;
        if set & bit == 0 {
            cut += deg[v] as i64 - 2 * (adj[v] & set).count_ones() as i64;
            set |= bit;
            size += 1;
        } else {
            set &= !bit;
            cut += 2 * (adj[v] & set).count_ones() as i64 - deg[v] as i64;
            size -= 1;
        }
        consider(set, size, cut, &mut best);
    }
    let (_, mask) = best.expect("n >= 2 always admits a balanced split");
    let part: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
    Bisection::from_part(g, &part, Exactness::Exact)
}

/// Lexicographic comparison of the sorted member lists of two bitmasks.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let low = diff & diff.wrapping_neg();
    let above = !(low | (low - 1));
    if a & low != 0 {
        // a has the smaller element here unless b has nothing left.
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Number of restarts of [`heuristic_bisection`].
pub const HEURISTIC_RESTARTS: u64 = 8;

/// Upper bound on `b(G)` by local search.
///
/// Each of [`HEURISTIC_RESTARTS`] runs grows a balanced start region by
/// breadth-first search from a seeded random root (random tie order), then
/// improves it with [`local_search`] passes. The best run wins, ties by
/// lexicographic `part_one`.
pub fn heuristic_bisection(g: &Graph, seed: u64) -> Result<Bisection> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Undefined(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for _ in 0..HEURISTIC_RESTARTS {
        let mut side = bfs_start(g, &mut rng);
        local_search(g, &mut side);
        let (width, part) = normalized(g, &side);
        let better = match &best {
            None => true,
            Some((w, p)) => width < *w || (width == *w && part < *p),
        };
        if better {
            best = Some((width, part));
        }
    }
    let (_, part) = best.expect("at least one restart");
    Bisection::from_part(g, &part, Exactness::HeuristicUpperBound)
}

/// `true` marks part one; exactly `floor(n/2)` vertices are marked.
fn bfs_start(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let n = g.vertex_count();
    let target = n / 2;
    let mut side = vec![false; n];
    let mut taken = 0;
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut order, rng);
    let mut queue = alloc::collections::VecDeque::new();
    for &root in &order {
        if taken == target {
            break;
        }
        if side[root] {
            continue;
        }
        side[root] = true;
        taken += 1;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let mut nbrs: Vec<usize> = g.neighbors(v).to_vec();
            shuffle(&mut nbrs, rng);
            for w in nbrs {
                if taken == target {
                    break;
                }
                if !side[w] {
                    side[w] = true;
                    taken += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    side
}

fn shuffle(items: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Passes of single-vertex moves: each pass moves every vertex at most once,
/// always the best-gain move that keeps both sides balanced (even when the
/// gain is negative), then rolls back to the best prefix. Stops when a pass
/// gains nothing.
fn local_search(g: &Graph, side: &mut [bool]) {
    let n = g.vertex_count();
    let lo = min_part(n);
    let gain = |side: &[bool], v: usize| -> i64 {
        g.neighbors(v).iter().map(|&w| if side[w] == side[v] { -1 } else { 1 }).sum()
    };
    loop {
        let mut count_one = side.iter().filter(|&&s| s).count();
        let mut locked = vec![false; n];
        let mut moves = Vec::new();
        let (mut total, mut best_total, mut best_len) = (0i64, 0i64, 0usize);
        loop {
            let mut pick: Option<(i64, usize)> = None;
            for v in 0..n {
                let ok = if side[v] { count_one > lo } else { n - count_one > lo };
                if locked[v] || !ok {
                    continue;
                }
                let gv = gain(side, v);
                if pick.is_none_or(|(best, _)| gv > best) {
                    pick = Some((gv, v));
                }
            }
            let Some((gv, v)) = pick else { break };
            if side[v] {
                count_one -= 1;
            } else {
                count_one += 1;
            }
            side[v] = !side[v];
            locked[v] = true;
            moves.push(v);
            total += gv;
            if total > best_total {
                best_total = total;
                best_len = moves.len();
            }
        }
        for &v in &moves[best_len..] {
            side[v] = !side[v];
        }
        if best_total <= 0 {
            return;
        }
    }
}

/// Width and the sorted side that holds vertex 0.
fn normalized(g: &Graph, side: &[bool]) -> (usize, Vec<usize>) {
    let width = g.edges().iter().filter(|e| side[e.0] != side[e.1]).count();
    let zero = side[0];
    (width, (0..side.len()).filter(|&v| side[v] == zero).collect())
}

/// The bisection inequality evaluated on exact data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PssReport {
    pub n: usize,
    pub e: usize,
    pub cr_value: usize,
    pub b_value: usize,
    pub degree_square_sum: f64,
    pub rhs: f64,
}

impl PssReport {
    /// `b <= 6.32 sqrt(cr) + 1.58 sqrt(sum d^2)`, up to [`COMPARE_TOL`].
    pub fn holds(&self) -> bool {
        math::le_tol(self.b_value as f64, self.rhs, COMPARE_TOL)
    }
}

/// Evaluates the bisection inequality for an exact bisection and an exact
/// crossing number.
pub fn pss_check(g: &Graph, cr_value: usize, b: &Bisection) -> Result<PssReport> {
    if b.exactness != Exactness::Exact {
        return Err(Error::HeuristicBisectionRejected);
    }
    let degree_square_sum = g.degree_power_sum(2.0)?;
    let rhs = PSS_CR_COEFF * math::sqrt(cr_value as f64) + PSS_DEGREE_COEFF * math::sqrt(degree_square_sum);
    Ok(PssReport {
        n: g.vertex_count(),
        e: g.edge_count(),
        cr_value,
        b_value: b.width,
        degree_square_sum,
        rhs,
    })
}

/// `(sum d_i^t)^(1/t)`.
pub fn lt_norm(g: &Graph, t: f64) -> Result<f64> {
    lt_norm_of(&g.degree_sequence(), t)
}

pub fn lt_norm_of(degrees: &[usize], t: f64) -> Result<f64> {
    let s = degree_power_sum(degrees, t)?;
    Ok(math::powf(s, 1.0 / t))
}

/// `l_2 <= l_t` for `0 < t <= 2`, to relative tolerance `1e-9`.
pub fn jensen_check(g: &Graph, t: f64) -> Result<bool> {
    if !(t > 0.0 && t <= 2.0) {
        return Err(Error::InvalidParameter(format!("t must lie in (0, 2], got {t}")));
    }
    Ok(math::le_tol(lt_norm(g, 2.0)?, lt_norm(g, t)?, COMPARE_TOL))
}

/// The grid family's violation of the degree-norm bound for `t > 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridNormReport {
    /// Grid side; the graph has `side^2` vertices.
    pub side: usize,
    pub t: f64,
    pub bisection_width: usize,
    /// `sqrt(cr) + l_t` with `cr = 0`.
    pub lhs: f64,
    /// `4 side^(2/t)`: the norm with every degree raised to 4.
    pub max_degree_norm: f64,
    /// `12 side^(2/t - 1) b`.
    pub scaled_width: f64,
    /// `(1/12) (side^2)^(1/2 - 1/t) lhs`, the lower bound on `b` in the
    /// vertex-count form.
    pub vertex_count_form_rhs: f64,
}

impl GridNormReport {
    /// `lhs <= 4 n^(2/t) <= 12 n^(2/t-1) b`.
    pub fn holds(&self) -> bool {
        math::le_tol(self.lhs, self.max_degree_norm, COMPARE_TOL)
            && math::le_tol(self.max_degree_norm, self.scaled_width, COMPARE_TOL)
    }

    /// `b >= (1/12) N^(1/2-1/t) (sqrt(cr) + l_t)` with `N = side^2`.
    pub fn vertex_count_form_holds(&self) -> bool {
        math::le_tol(self.vertex_count_form_rhs, self.bisection_width as f64, COMPARE_TOL)
    }
}

/// Evaluates the `t > 2` chain for `grid(side)` and a bisection of it.
pub fn t3_counterexample_check(side: usize, t: f64, b: &Bisection) -> Result<GridNormReport> {
    if t <= 2.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must exceed 2, got {t}")));
    }
    let (g, _) = crate::generators::grid(side)?;
    if !b.is_consistent_with(&g) {
        return Err(Error::InvalidParameter(format!("bisection does not belong to grid({side})")));
    }
    let s = side as f64;
    let lhs = lt_norm(&g, t)?;
    Ok(GridNormReport {
        side,
        t,
        bisection_width: b.width,
        lhs,
        max_degree_norm: 4.0 * math::powf(s, 2.0 / t),
        scaled_width: 12.0 * math::powf(s, 2.0 / t - 1.0) * b.width as f64,
        vertex_count_form_rhs: math::powf(s * s, 0.5 - 1.0 / t) * lhs / 12.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{classic, grid, random_graph, Classic};
    use proptest::prelude::*;

    /// Naive oracle: every subset containing vertex 0, recounting the cut.
    fn brute_force_width(g: &Graph) -> usize {
        let n = g.vertex_count();
        let lo = min_part(n);
        (0u64..(1 << (n - 1)))
            .map(|m| (m << 1) | 1)
            .filter(|m| {
                let k = m.count_ones() as usize;
                k >= lo && n - k >= lo
            })
            .map(|m| g.edges().iter().filter(|e| ((m >> e.0) & 1) != ((m >> e.1) & 1)).count())
            .min()
            .unwrap()
    }

    #[test]
    fn exact_examples() {
        let b = exact_bisection(&classic(Classic::Path(4)), 24).unwrap();
        assert_eq!(b.width, 1);
        assert_eq!(b.part_one.members(), &[0, 1]);
        assert_eq!(exact_bisection(&classic(Classic::Complete(4)), 24).unwrap().width, 4);
        // Frozen from the brute-force oracle.
        let g4 = grid(4).unwrap().0;
        assert_eq!(brute_force_width(&g4), 4);
        assert_eq!(exact_bisection(&g4, 24).unwrap().width, 4);
        assert_eq!(exact_bisection(&classic(Classic::Complete(5)), 24).unwrap().width, 6);
    }

    #[test]
    fn exact_guards() {
        assert_eq!(exact_bisection(&Graph::empty(1), 24), Err(Error::Undefined(1)));
        assert_eq!(
            exact_bisection(&grid(5).unwrap().0, 24),
            Err(Error::TooLarge { n: 25, cap: 24 })
        );
    }

    #[test]
    fn lexicographic_tiebreak() {
        assert!(lex_less(0b011, 0b101)); // [0,1] < [0,2]
        assert!(lex_less(0b011, 0b111)); // [0,1] < [0,1,2]
        assert!(!lex_less(0b111, 0b011));
        assert!(lex_less(0b0111, 0b1011)); // [0,1,2] < [0,1,3]
        // K4: every 2/2 split has width 4, so {0,1} wins.
        let b = exact_bisection(&classic(Classic::Complete(4)), 24).unwrap();
        assert_eq!(b.part_one.members(), &[0, 1]);
    }

    #[test]
    fn heuristic_examples() {
        for seed in 0..5 {
            assert_eq!(heuristic_bisection(&classic(Classic::Path(4)), seed).unwrap().width, 1);
            assert_eq!(heuristic_bisection(&classic(Classic::Complete(4)), seed).unwrap().width, 4);
        }
        let b = heuristic_bisection(&grid(10).unwrap().0, 0).unwrap();
        assert!((4..=14).contains(&b.width), "width {}", b.width);
        assert_eq!(b.exactness, Exactness::HeuristicUpperBound);
        assert!(b.is_consistent_with(&grid(10).unwrap().0));
    }

    #[test]
    fn pss_examples() {
        let k5 = classic(Classic::Complete(5));
        let b = exact_bisection(&k5, 24).unwrap();
        let r = pss_check(&k5, 1, &b).unwrap();
        assert_eq!((r.b_value, r.degree_square_sum), (6, 80.0));
        assert!((r.rhs - (6.32 + 1.58 * 80f64.sqrt())).abs() < 1e-12);
        assert!(r.holds());

        let empty = Graph::empty(3);
        let b = exact_bisection(&empty, 24).unwrap();
        let r = pss_check(&empty, 0, &b).unwrap();
        assert_eq!((r.b_value, r.rhs), (0, 0.0));
        assert!(r.holds());

        let h = heuristic_bisection(&k5, 1).unwrap();
        assert_eq!(pss_check(&k5, 1, &h), Err(Error::HeuristicBisectionRejected));
    }

    #[test]
    fn norms() {
        let k4 = classic(Classic::Complete(4));
        assert_eq!(lt_norm(&k4, 2.0).unwrap(), 6.0);
        assert_eq!(lt_norm(&k4, 1.0).unwrap(), 12.0);
        let g5 = grid(5).unwrap().0;
        assert!((lt_norm(&g5, 4.0).unwrap() - 3340f64.powf(0.25)).abs() < 1e-12);
        assert!(jensen_check(&classic(Classic::Path(4)), 1.0).unwrap());
        assert!(jensen_check(&g5, 2.0).unwrap());
        assert!(jensen_check(&g5, 0.5).unwrap());
        assert!(jensen_check(&g5, 2.5).is_err());
        assert!(jensen_check(&g5, 0.0).is_err());
    }

    #[test]
    fn grid_chain_examples() {
        let b2 = exact_bisection(&grid(2).unwrap().0, 24).unwrap();
        assert_eq!(b2.width, 2);
        let r = t3_counterexample_check(2, 3.0, &b2).unwrap();
        assert!((r.max_degree_norm - 4.0 * 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((r.scaled_width - 12.0 * 2f64.powf(-1.0 / 3.0) * 2.0).abs() < 1e-12);
        assert!(r.holds() && r.vertex_count_form_holds());

        let b4 = exact_bisection(&grid(4).unwrap().0, 24).unwrap();
        let r = t3_counterexample_check(4, 4.0, &b4).unwrap();
        assert!((r.max_degree_norm - 8.0).abs() < 1e-12);
        assert!((r.scaled_width - 24.0).abs() < 1e-12);
        assert!(r.holds());

        assert!(t3_counterexample_check(4, 2.0, &b4).is_err());
        assert!(t3_counterexample_check(3, 3.0, &b4).is_err());
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force_and_bounds_heuristic(n in 2usize..=12, p in 0.0f64..1.0, seed in 0u64..10_000) {
            let g = random_graph(n, p, seed).unwrap();
            let exact = exact_bisection(&g, 24).unwrap();
            prop_assert_eq!(exact.width, brute_force_width(&g));
            prop_assert!(exact.is_consistent_with(&g));
            prop_assert!(exact.part_one.contains(0));
            let h = heuristic_bisection(&g, seed).unwrap();
            prop_assert!(h.width >= exact.width);
            prop_assert!(h.is_consistent_with(&g));
        }

        #[test]
        fn norm_monotone_in_t(n in 1usize..30, p in 0.0f64..1.0, seed in 0u64..10_000) {
            let g = random_graph(n, p, seed).unwrap();
            let ts = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
            for w in ts.windows(2) {
                let (a, b) = (lt_norm(&g, w[0]).unwrap(), lt_norm(&g, w[1]).unwrap());
                prop_assert!(b <= a * (1.0 + 1e-9) + 1e-12);
            }
        }
    }
}
