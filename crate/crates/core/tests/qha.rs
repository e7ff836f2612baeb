use ordzeta::exactarith::{ChainRing, Flavor};
use ordzeta::finmod::*;
use ordzeta::orders::*;
use ordzeta::qha::*;
use ordzeta::zeta::verify_block_lemma;

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn radical_layers_of_truncated_polynomials() {
    for m in 2..=4 {
        let a = FinAlgebra::truncated_poly(2, m);
        let (cat, ch) = radical_layer_chain(&a, budget()).unwrap();
        assert_eq!(ch.levels.len(), m + 1);
        assert!(ch.verdict, "m = {m}");
        assert!(ch.steps.iter().all(|s| s.radical_ok));
        let h = certify_heredity(&cat, &ch.levels, 10).unwrap();
        // End(A/J + ... + A/J^m) has dimension sum of min(i, j)
        let expect: usize = (1..=m).flat_map(|i| (1..=m).map(move |j| i.min(j))).sum();
        assert_eq!(h.gamma_dim, expect);
        match h.gl_dim {
            PdValue::Finite(g) => assert!(g <= m),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn radical_layers_of_small_algebras() {
    let a = FinAlgebra::truncated_poly(3, 1);
    let (cat, ch) = radical_layer_chain(&a, budget()).unwrap();
    assert!(ch.verdict);
    let h = certify_heredity(&cat, &ch.levels, 6).unwrap();
    assert!(matches!(h.gl_dim, PdValue::Finite(0)));

    let a = FinAlgebra::upper_triangular(2, 2);
    let (cat, ch) = radical_layer_chain(&a, budget()).unwrap();
    assert!(ch.verdict);
    let h = certify_heredity(&cat, &ch.levels, 6).unwrap();
    assert!(matches!(h.gl_dim, PdValue::Finite(g) if g <= 2));
}

#[test]
fn iterated_radical_of_the_regular_module() {
    let a = FinAlgebra::truncated_poly(2, 3);
    let (cat, ch, dims) = iterated_radical_chain(&a, &FinModule::regular(&a), "Λ", budget()).unwrap();
    assert_eq!(dims, vec![3, 2, 1, 0]);
    assert!(ch.verdict);
    let h = certify_heredity(&cat, &ch.levels, 8).unwrap();
    assert!(matches!(h.gl_dim, PdValue::Finite(g) if g <= 4));
}

#[test]
fn rep_dim_bounds() {
    let r = rep_dim_upper(&FinAlgebra::truncated_poly(2, 1), budget()).unwrap();
    assert_eq!(r.bound, 0);
    for a in [FinAlgebra::truncated_poly(2, 2), FinAlgebra::truncated_poly(2, 3), FinAlgebra::upper_triangular(2, 3)] {
        let r = rep_dim_upper(&a, budget()).unwrap();
        assert!(r.chain_verdict && r.heredity.verdict && r.within_2m_minus_2);
        assert!(r.bound <= 2 * r.chain_length - 2);
    }
    let r = rep_dim_upper(&FinAlgebra::truncated_poly(2, 3), budget()).unwrap();
    assert_eq!(r.layer_dims, vec![6, 4, 2, 0]);
}

#[test]
fn auslander_algebras_of_nakayama_algebras() {
    for a in [FinAlgebra::truncated_poly(2, 3), FinAlgebra::truncated_poly(3, 2), FinAlgebra::upper_triangular(2, 2)] {
        let r = auslander_check(&a, None, budget()).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(matches!(r.gl_dim, PdValue::Finite(2)));
    }
    let r = auslander_check(&FinAlgebra::truncated_poly(2, 1), None, budget()).unwrap();
    assert!(matches!(r.gl_dim, PdValue::Finite(0)));
}

#[test]
fn auslander_check_rejects_an_incomplete_catalog() {
    let a = FinAlgebra::truncated_poly(2, 3);
    let mut cat = nakayama_catalog(&a, budget()).unwrap();
    cat.remove(1);
    assert!(matches!(auslander_check(&a, Some(cat), budget()), Err(QhaError::CatalogIncomplete(_))));
}

#[test]
fn wrong_levels_are_caught() {
    let a = FinAlgebra::truncated_poly(2, 3);
    let (cat, ch) = radical_layer_chain(&a, budget()).unwrap();
    let top = cat.labels.iter().position(|l| l == "Λ").unwrap();
    let simple = cat.labels.iter().position(|l| l == "Λ/J^1").unwrap();
    // keeping the projective instead of the simple
    let bad = vec![ch.levels[0].clone(), vec![top, simple], vec![top], vec![]];
    let chain_ok = (0..3).all(|n| cat.check_step(&bad[n], &bad[n + 1], Side::Left).unwrap().verdict);
    let her = heredity_chain(&cat, &bad, 10).unwrap();
    assert!(!(chain_ok && her.verdict));
    assert!(matches!(verify_rejective_step(&cat, &bad[1], &bad[2], Side::Left), Err(QhaError::NotRejective(_))));
}

fn order(spec: OrderSpec, flavor: Flavor, d: usize) -> Order {
    Order::new(&spec, ChainRing::new(2, d as u32 + 4, flavor).unwrap(), budget()).unwrap()
}

#[test]
fn cusp_chain_removes_the_deep_lattices() {
    let d = 8;
    let o = order(OrderSpec::Cusp { n: 3 }, Flavor::Equal, d);
    let v = o.regular_module();
    let c = build_cv_chain(&o, &v).unwrap();
    let removed: Vec<&str> = c.report.steps.iter().map(|s| s.removed.as_str()).collect();
    assert_eq!(removed, ["Λ_3", "Λ_2", "Λ_1"]);
    assert_eq!(c.report.terminal, ["Λ_0"]);
    assert!(c.report.steps.iter().all(|s| s.approx_in_subcat && s.approx_index_exp == 1));
    for s in &c.steps {
        let r = verify_block_lemma(&o, s, &v, d).unwrap();
        assert!(r.zero_block_ok && r.diagonal_block_ok);
    }
}

#[test]
fn congruence_chain_ends_in_the_maximal_order() {
    let d = 8;
    for n in 2..=3 {
        let o = order(OrderSpec::Congruence { n }, Flavor::Mixed, d);
        let v = o.regular_module();
        let c = build_cv_chain(&o, &v).unwrap();
        assert_eq!(c.report.terminal, ["R×0", "0×R"]);
        assert_eq!(c.steps.len(), n as usize);
        for s in &c.steps {
            let r = verify_block_lemma(&o, s, &v, d).unwrap();
            assert!(r.zero_block_ok && r.diagonal_block_ok);
        }
    }
}

#[test]
fn hereditary_terminal_extends_to_the_maximal_overorder() {
    let d = 8;
    let o = order(OrderSpec::triangular(3), Flavor::Mixed, d);
    let v = AModule(vec![1]);
    let c = build_cv_chain(&o, &v).unwrap();
    assert_eq!(c.report.hereditary_terminal.len(), 3);
    assert_eq!(c.report.extension.len(), 2);
    assert_eq!(c.report.terminal, ["P_3"]);
    for s in &c.steps {
        let r = verify_block_lemma(&o, s, &v, d).unwrap();
        assert!(r.verdict, "{}", r.removed);
    }
    let o = order(OrderSpec::full_matrix(2), Flavor::Mixed, d);
    let c = build_cv_chain(&o, &AModule(vec![1])).unwrap();
    assert!(c.steps.is_empty() && c.report.extension.is_empty());
}
