//! Agreement between independent modules on small graphs.

use crossnum_core::bisection::{exact_bisection, heuristic_bisection, pss_check};
use crossnum_core::crossing::{exact_crossing_number, fixture_registry, CrossingValue};
use crossnum_core::decomposition::{decompose, verify_trace, BisectorPolicy, CheckStatus};
use crossnum_core::generators::{classic, grid, random_graph, Classic};
use crossnum_core::planarity::is_planar;
use crossnum_core::Graph;
use proptest::prelude::*;

#[test]
fn registry_reproduces() {
    for f in fixture_registry() {
        let r = exact_crossing_number(&f.graph, 3).unwrap();
        assert_eq!(r.value, CrossingValue::Exact(f.crossing_number), "{}", f.name);
        assert!(r.certificate.unwrap().verify(), "{}", f.name);
    }
}

#[test]
fn deleting_an_edge_of_k5_or_k33_leaves_a_planar_graph() {
    for g in [classic(Classic::Complete(5)), classic(Classic::CompleteBipartite(3, 3))] {
        for &e in g.edges() {
            let h = g.without_edges(&[e]);
            assert_eq!(exact_crossing_number(&h, 1).unwrap().value, CrossingValue::Exact(0));
        }
    }
}

#[test]
fn pss_holds_on_registry() {
    for f in fixture_registry() {
        let b = exact_bisection(&f.graph, 24).unwrap();
        let rep = pss_check(&f.graph, f.crossing_number, &b).unwrap();
        assert!(rep.holds(), "{}: {rep:?}", f.name);
    }
}

#[test]
fn grid_bisection_widths() {
    // Frozen from the exhaustive search; grid(n) never drops below n/3.
    let widths: Vec<usize> = (2..=5).map(|n| exact_bisection(&grid(n).unwrap().0, 25).unwrap().width).collect();
    assert_eq!(widths, [2, 3, 4, 5]);
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..=7, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, s)| random_graph(n, p, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planar_iff_crossing_free(g in small_graph()) {
        let r = exact_crossing_number(&g, 0).unwrap();
        prop_assert_eq!(r.value == CrossingValue::Exact(0), is_planar(&g));
    }

    #[test]
    fn crossing_number_monotone_under_deletion(g in small_graph(), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0 && g.edge_count() <= 12);
        let full = exact_crossing_number(&g, 3).unwrap().value;
        let e = g.edges()[pick.index(g.edge_count())];
        let less = exact_crossing_number(&g.without_edges(&[e]), 3).unwrap().value;
        if let (CrossingValue::Exact(a), CrossingValue::Exact(b)) = (full, less) {
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn heuristic_never_beats_exact(n in 2usize..=16, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).unwrap();
        prop_assert!(heuristic_bisection(&g, seed).unwrap().width >= exact_bisection(&g, 24).unwrap().width);
    }

    #[test]
    fn auto_traces_verify(n in 2usize..=30, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).unwrap();
        prop_assume!(g.edge_count() > 0);
        let t = decompose(&g, 0.5, 1.0, BisectorPolicy::Auto { cap: 16, seed }).unwrap();
        let v = verify_trace(&t, None);
        prop_assert!(!v.has_failures(), "{:?}", v);
        prop_assert_ne!(v.status("a_size_bound"), Some(CheckStatus::Skipped));
    }
}
