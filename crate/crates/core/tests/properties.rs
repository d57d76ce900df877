use proptest::prelude::*;

use fracfactor::criticality::{enumerate_independent_sets, is_fractional_id_factor_critical, Limits};
use fracfactor::factor::{
    find_fractional_factor, has_fractional_factor_bruteforce, validate_assignment, FactorOutcome,
    FactorParams, FractionalAssignment,
};
use fracfactor::graph::{pairs, Graph, VertexSet};
use fracfactor::hypothesis::check_theorem1_hypotheses;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges = pairs(n).zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn params() -> impl Strategy<Value = FactorParams> {
    (1u32..=3, 0u32..=2).prop_map(|(a, d)| FactorParams::new(a, a + d).unwrap())
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), n)
        .prop_map(|bits| bits.iter().enumerate().filter(|(_, b)| **b).map(|(v, _)| v).collect())
}

proptest! {
    #[test]
    fn degree_sum_is_twice_size(g in graph(12)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.size());
    }

    #[test]
    fn join_adds_other_order_to_degrees(g in graph(7), h in graph(7)) {
        let j = g.join(&h);
        prop_assert_eq!(j.order(), g.order() + h.order());
        prop_assert_eq!(j.size(), g.size() + h.size() + g.order() * h.order());
        for v in 0..g.order() {
            prop_assert_eq!(j.degree(v).unwrap(), g.degree(v).unwrap() + h.order());
        }
        for v in 0..h.order() {
            prop_assert_eq!(j.degree(g.order() + v).unwrap(), h.degree(v).unwrap() + g.order());
        }
    }

    #[test]
    fn edges_between_is_symmetric((g, s) in graph(10).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), subset(n))
    })) {
        let rest: VertexSet = (0..g.order()).filter(|v| !s.contains(*v)).collect();
        let e = g.edges_between(&s, &rest).unwrap();
        prop_assert_eq!(e, g.edges_between(&rest, &s).unwrap());
        let degree_sum: usize = s.iter().map(|v| g.degree(v).unwrap()).sum();
        let inside = g.edges().filter(|(u, v)| s.contains(*u) && s.contains(*v)).count();
        prop_assert_eq!(degree_sum, 2 * inside + e);
    }

    #[test]
    fn edge_list_round_trips(g in graph(10)) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn solver_agrees_with_oracle(g in graph(9), p in params()) {
        let oracle = has_fractional_factor_bruteforce(&g, p, 20).unwrap();
        match find_fractional_factor(&g, p, 20).unwrap() {
            FactorOutcome::Feasible(h) => {
                prop_assert!(oracle.is_feasible());
                prop_assert!(validate_assignment(&g, p, &h).unwrap().valid);
                prop_assert!(h.is_half_integral());
            }
            FactorOutcome::Infeasible(cert) => {
                prop_assert!(!oracle.is_feasible());
                let cert = cert.unwrap();
                prop_assert!(cert.delta < 0);
                prop_assert!(cert.verify(&g, p).unwrap());
            }
        }
    }

    #[test]
    fn widening_the_interval_preserves_factors(g in graph(8), a in 1u32..=3, d in 0u32..=2) {
        let narrow = FactorParams::new(a, a + d).unwrap();
        let wide = FactorParams::new(a, a + d + 1).unwrap();
        let lower = FactorParams::new((a - 1).max(1), a + d).unwrap();
        let has = |p| has_fractional_factor_bruteforce(&g, p, 20).unwrap().is_feasible();
        if has(narrow) {
            prop_assert!(has(wide));
            prop_assert!(has(lower));
        }
    }

    #[test]
    fn witness_text_round_trips(g in graph(8), p in params()) {
        if let FactorOutcome::Feasible(h) = find_fractional_factor(&g, p, 20).unwrap() {
            prop_assert_eq!(FractionalAssignment::parse(&h.to_text()).unwrap(), h);
        }
    }

    #[test]
    fn independent_sets_are_independent_and_distinct(g in graph(8)) {
        let sets: Vec<VertexSet> = enumerate_independent_sets(&g, None).collect();
        let count = (0u64..1 << g.order())
            .filter(|&m| g.is_independent(&VertexSet::from_mask(m)).unwrap())
            .count();
        prop_assert_eq!(sets.len(), count);
        for w in sets.windows(2) {
            prop_assert!((w[0].len(), w[0].to_vec()) < (w[1].len(), w[1].to_vec()));
        }
    }

    #[test]
    fn criticality_failure_is_witnessed(g in graph(7), p in params()) {
        let report = is_fractional_id_factor_critical(&g, p, Limits::default()).unwrap();
        if let Some(set) = &report.failing_set {
            prop_assert!(!report.verdict);
            prop_assert!(g.is_independent(set).unwrap());
            let h = g.delete_vertices(set).unwrap().graph;
            prop_assert!(!has_fractional_factor_bruteforce(&h, p, 20).unwrap().is_feasible());
        } else {
            prop_assert!(report.verdict);
        }
    }

    #[test]
    fn hypothesis_margins_match_flags(g in graph(10), p in params()) {
        let r = check_theorem1_hypotheses(&g, p).unwrap();
        prop_assert_eq!(r.order_ok, r.margins.order >= 0);
        prop_assert_eq!(r.min_degree_ok, r.margins.min_degree >= 0);
        prop_assert_eq!(r.neighborhood_ok, r.margins.neighborhood.is_none_or(|m| m >= 0));
    }
}
