mod common;

use std::collections::BTreeSet;

use pbs_core::exact::{fpt_solve, DEFAULT_MAX_K};
use pbs_core::model::validate_simplification;
use pbs_core::reduction::{
    build_pbs_from_graph, c_closed_form, corresponding_simplification, corresponding_size, d2_closed_form,
    d4_closed_form, expected_bend_count, extract_mids, greedy_maximal_independent_set, min_independent_dominating_set,
    verify_critical_distances, verify_gadget_claims, verify_gadget_claims_with, GadgetRef, Graph, Quantity,
    ReductionError, ReductionParams, D2_LOWER_BOUND,
};
use pbs_core::ToleranceSpec;

fn build(g: &Graph) -> (pbs_core::PolylineBundle, pbs_core::reduction::GadgetLayout) {
    build_pbs_from_graph(g, &ReductionParams::defaults(g.num_vertices(), 1.0)).unwrap()
}

#[test]
fn corpus_has_no_isolated_vertices_and_is_sparse() {
    let corpus = common::graph_corpus();
    assert_eq!(corpus.len(), 20);
    for g in &corpus {
        assert!((2..=5).contains(&g.num_vertices()));
        assert!(g.num_edges() <= 2 * g.num_vertices());
        assert!((0..g.num_vertices()).all(|v| !g.neighbors(v).is_empty()));
    }
}

#[test]
fn size_law_on_corpus() {
    for g in common::graph_corpus() {
        let (bundle, layout) = build(&g);
        let (n_hat, m_hat) = (g.num_vertices(), g.num_edges());
        assert_eq!(bundle.num_bends(), expected_bend_count(n_hat, m_hat));
        assert!(bundle.num_bends() as f64 <= 10.0 * g.sparsity() * (n_hat as f64).powi(3));
        assert_eq!(bundle.num_polylines(), 2 * n_hat + m_hat);
        for s in layout.shared_bends() {
            assert_eq!(bundle.occurrences(s).len(), 2);
        }
        for v in &layout.vertex_gadgets {
            assert_eq!(v.placement.bends.len(), 2 * n_hat + 2);
        }
        for e in &layout.edge_gadgets {
            assert_eq!(e.placement.bends.len(), 2 * n_hat * n_hat + 5);
        }
        for ng in &layout.neighborhood_gadgets {
            for i in 0..ng.shared.len() - 1 {
                assert_eq!(ng.zigzag(i).len(), 2 * n_hat * n_hat + 1);
            }
        }
    }
}

#[test]
fn claims_on_corpus() {
    for g in common::graph_corpus() {
        let (bundle, layout) = build(&g);
        let report = verify_gadget_claims(&bundle, &layout).unwrap();
        for r in &report.gadgets {
            match r.gadget {
                GadgetRef::Vertex(_) => assert_eq!(r.long_shortcuts, vec![(0, r.len - 1)]),
                GadgetRef::Edge(_) => {
                    let n = r.len;
                    for e in [(0, n - 1), (0, n - 2), (1, n - 1)] {
                        assert!(r.long_shortcuts.contains(&e));
                    }
                    assert!(r.extras.len() <= 4);
                    assert_eq!(r.long_shortcuts.len(), 3 + r.extras.len());
                }
                GadgetRef::Neighborhood(_) => {}
            }
        }
        verify_gadget_claims_with(&bundle, &layout, true).unwrap();
    }
}

#[test]
fn neighborhood_gadget_of_degree_one_vertex() {
    // K₂, vertex 0: Adj = {0, 1}; chain F, b1, 9 zigzag bends, b2, L.
    let (bundle, layout) = build(&common::k2());
    let report = verify_gadget_claims(&bundle, &layout).unwrap();
    let r = report.get(GadgetRef::Neighborhood(0)).unwrap();
    assert_eq!(r.len, 13);
    let expected = vec![(0, 2), (0, 11), (1, 11), (1, 12), (10, 12)];
    assert_eq!(r.long_shortcuts, expected);
}

#[test]
fn critical_distances_at_default_spacing() {
    let mut seen_three = 0;
    for g in common::graph_corpus() {
        let (bundle, layout) = build(&g);
        let report = verify_critical_distances(&bundle, &layout).unwrap();
        for q in [Quantity::D1, Quantity::D2, Quantity::D3] {
            assert!(report.of(q).count() > 0);
        }
        for rec in &report.records {
            assert!((rec.measured - rec.closed_form).abs() <= 1e-9);
            assert!(rec.r_prime >= 3.0 - 1e-12);
        }
        let at_three: Vec<_> = report.records.iter().filter(|r| (r.r_prime - 3.0).abs() < 1e-12).collect();
        seen_three += at_three.len();
        for rec in at_three {
            match rec.quantity {
                Quantity::D2 => assert!((rec.measured - D2_LOWER_BOUND).abs() < 1e-9),
                Quantity::D3 => assert!(rec.measured >= c_closed_form(3.0) - 1e-9),
                Quantity::D4 => assert!((rec.measured - d4_closed_form(3.0)).abs() < 1e-9),
                Quantity::D1 => assert!(rec.measured <= 1.0 + 1e-9),
            }
        }
    }
    assert!(seen_three > 0);
    assert!((d2_closed_form(3.0) - D2_LOWER_BOUND).abs() < 1e-15);
}

#[test]
fn round_trip_on_corpus() {
    for g in common::graph_corpus() {
        let (bundle, layout) = build(&g);
        let tol = ToleranceSpec::new(1.0).unwrap();
        let set = greedy_maximal_independent_set(&g);
        let retained = corresponding_simplification(&layout, &set).unwrap();
        assert_eq!(retained.len(), corresponding_size(g.num_vertices(), g.num_edges(), set.len()));
        assert!(validate_simplification(&bundle, tol, &retained, 1.0).unwrap().valid);
        let back = extract_mids(&layout, &retained);
        assert!(back.read_off);
        assert_eq!(back.set, set);

        let opt = min_independent_dominating_set(&g).unwrap();
        let retained = corresponding_simplification(&layout, &opt).unwrap();
        assert!(validate_simplification(&bundle, tol, &retained, 1.0).unwrap().valid);
        assert_eq!(extract_mids(&layout, &retained).set, opt);
    }
}

#[test]
fn k2_corresponding_size_is_fourteen() {
    let (_, layout) = build(&common::k2());
    let retained = corresponding_simplification(&layout, &BTreeSet::from([0])).unwrap();
    assert_eq!(retained.len(), 14);
}

#[test]
fn rejects_non_dominating_or_dependent_sets() {
    let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let (_, layout) = build(&g);
    for bad in [BTreeSet::new(), BTreeSet::from([0]), BTreeSet::from([0, 1])] {
        assert!(matches!(
            corresponding_simplification(&layout, &bad),
            Err(ReductionError::NotIndependentDominating(_))
        ));
    }
}

#[test]
fn all_bends_retained_falls_back_to_greedy() {
    let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let (bundle, layout) = build(&g);
    let all: BTreeSet<usize> = (0..bundle.num_bends()).collect();
    let out = extract_mids(&layout, &all);
    assert!(!out.read_off);
    assert_eq!(out.set, greedy_maximal_independent_set(&g));
}

#[test]
fn fpt_on_k2_yields_minimum_dominating_set() {
    let (bundle, layout) = build(&common::k2());
    let tol = ToleranceSpec::new(1.0).unwrap();
    let out = fpt_solve(&bundle, tol, DEFAULT_MAX_K).unwrap();
    assert_eq!(out.stats.k, 6);
    assert!(validate_simplification(&bundle, tol, &out.retained, 1.0).unwrap().valid);
    assert!(out.retained.len() <= 14);
    let ext = extract_mids(&layout, &out.retained);
    assert!(common::k2().is_independent_dominating(&ext.set));
    assert_eq!(ext.set.len(), 1);
}

#[test]
fn two_polyline_mode_preserves_claims_and_round_trip() {
    for g in common::graph_corpus().into_iter().take(6) {
        let mut p = ReductionParams::defaults(g.num_vertices(), 1.0);
        p.two_polyline_mode = true;
        let (bundle, layout) = build_pbs_from_graph(&g, &p).unwrap();
        assert_eq!(bundle.num_polylines(), 2);
        let set = greedy_maximal_independent_set(&g);
        let retained = corresponding_simplification(&layout, &set).unwrap();
        let tol = ToleranceSpec::new(1.0).unwrap();
        assert!(validate_simplification(&bundle, tol, &retained, 1.0).unwrap().valid);
        assert_eq!(
            retained.len(),
            corresponding_size(g.num_vertices(), g.num_edges(), set.len()) + layout.connectors.len()
        );
        assert_eq!(extract_mids(&layout, &retained).set, set);
    }
}

#[test]
fn invalid_params_rejected() {
    let g = common::k2();
    let mut p = ReductionParams::defaults(2, 1.0);
    p.gamma = 1.0;
    assert!(matches!(build_pbs_from_graph(&g, &p), Err(ReductionError::InvalidParams(_))));
}

#[test]
fn wider_spacing_still_certifies() {
    let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let mut p = ReductionParams::defaults(3, 0.5);
    p.x_spacing *= 1.7;
    let (bundle, layout) = build_pbs_from_graph(&g, &p).unwrap();
    let report = verify_critical_distances(&bundle, &layout).unwrap();
    assert!(report.records.iter().all(|r| r.r_prime > 3.0));
}
