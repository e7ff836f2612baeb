use num_traits::{One, Zero};

use ordzeta::exactarith::*;
use ordzeta::finmod::Budget;
use ordzeta::orders::*;
use ordzeta::zeta::*;

fn order(spec: OrderSpec, p: u64, flavor: Flavor, d: usize) -> Order {
    Order::new(&spec, ChainRing::new(p, d as u32 + 4, flavor).unwrap(), Budget::default()).unwrap()
}

fn polys(rows: &[&[&[i64]]]) -> Vec<Vec<Vec<Q>>> {
    rows.iter().map(|r| r.iter().map(|e| e.iter().map(|&c| q(c)).collect()).collect()).collect()
}

fn one_minus_t_pow(k: usize) -> Vec<Q> {
    poly_pow(&[Q::one(), -Q::one()], k)
}

fn expand(num: Vec<Q>, den: &[Q], d: usize) -> TruncSeries {
    RatFuncT::new(num, den.to_vec()).unwrap().expand(d)
}

fn assert_matrix(zm: &ZetaMatrix, labels: &[&str], want: &[Vec<Vec<Q>>], den: &[Q]) {
    for (i, li) in labels.iter().enumerate() {
        let r = zm.position(li).unwrap_or_else(|| panic!("no class {li} in {:?}", zm.labels));
        for (j, lj) in labels.iter().enumerate() {
            let c = zm.position(lj).unwrap();
            assert_eq!(zm.entries[r][c], expand(want[i][j].clone(), den, zm.d), "entry ({li}, {lj})");
        }
    }
}

/// The displayed 4x4 matrix for the congruence order, rows and columns
/// Lambda_3, Lambda_2, Lambda_1, Lambda_0, numerators over (1-T)^2.
fn congruence3_expected(p: i64) -> Vec<Vec<Vec<Q>>> {
    let (p2, p3) = (p * p, p * p * p);
    polys(&[
        &[
            &[1, -2, p + 1, -2 * p, p2 + p, -2 * p2, p3],
            &[0, 1, -2, p + 1, -2 * p, p2],
            &[0, 0, 1, -2, p],
            &[0, 0, 0, 1],
        ],
        &[&[0, p, -2 * p, p2 + p, -2 * p2, p3], &[1, -2, p + 1, -2 * p, p2], &[0, 1, -2, p], &[0, 0, 1]],
        &[&[0, 0, p2, -2 * p2, p3], &[0, p, -2 * p, p2], &[1, -2, p], &[0, 1]],
        &[&[0, 0, 0, p3 - p2], &[0, 0, p2 - p], &[0, p - 1], &[1]],
    ])
}

/// The cusp matrix, numerators over (1-T).
fn cusp3_expected(p: i64) -> Vec<Vec<Vec<Q>>> {
    let (p2, p3) = (p * p, p * p * p);
    polys(&[
        &[&[1, -1, p, -p, p2, -p2, p3], &[0, 1, -1, p, -p, p2], &[0, 0, 1, -1, p], &[0, 0, 0, 1]],
        &[&[0, p, -p, p2, -p2, p3], &[1, -1, p, -p, p2], &[0, 1, -1, p], &[0, 0, 1]],
        &[&[0, 0, p2, -p2, p3], &[0, p, -p, p2], &[1, -1, p], &[0, 1]],
        &[&[0, 0, 0, p3], &[0, 0, p2], &[0, p], &[1]],
    ])
}

const LAMBDAS: [&str; 4] = ["Λ_3", "Λ_2", "Λ_1", "Λ_0"];

#[test]
fn tiled_triangular_matrix_and_det() {
    for n in [2usize, 3] {
        for p in [2u64, 3] {
            let d = 12;
            let o = order(OrderSpec::triangular(n), p, Flavor::Mixed, d);
            let v = AModule(vec![1]);
            let zm = zeta_matrix(&o, &v, d).unwrap();
            assert_eq!(zm.size(), n);
            let mut den = vec![Q::zero(); n + 1];
            den[0] = Q::one();
            den[n] = -Q::one();
            for i in 0..n {
                for j in 0..n {
                    let r = zm.position(&format!("P_{}", i + 1)).unwrap();
                    let c = zm.position(&format!("P_{}", j + 1)).unwrap();
                    let e = (i + n - j) % n;
                    let mut num = vec![Q::zero(); e + 1];
                    num[e] = Q::one();
                    assert_eq!(zm.entries[r][c], expand(num, &den, d), "n={n} p={p} ({i},{j})");
                }
            }
            let det = det_zeta(&zm, None).unwrap();
            assert_eq!(det, RatFuncT::new(vec![Q::one()], den.clone()).unwrap());
        }
    }
}

#[test]
fn congruence_matrix_matches_displayed_values() {
    for flavor in [Flavor::Mixed, Flavor::Equal] {
        let d = 10;
        let o = order(OrderSpec::Congruence { n: 3 }, 2, flavor, d);
        let zm = zeta_matrix(&o, &o.regular_module(), d).unwrap();
        assert_eq!(zm.size(), 4);
        assert_matrix(&zm, &LAMBDAS, &congruence3_expected(2), &one_minus_t_pow(2));
        // the entry with numerator T^3 sits in row Lambda_3, column Lambda_0
        let e = &zm.entries[zm.position("Λ_3").unwrap()][zm.position("Λ_0").unwrap()];
        assert_eq!(e.c[3], q(1));
    }
}

#[test]
fn cusp_matrix_matches_displayed_values() {
    let d = 10;
    let o = order(OrderSpec::Cusp { n: 3 }, 2, Flavor::Equal, d);
    let zm = zeta_matrix(&o, &o.regular_module(), d).unwrap();
    assert_matrix(&zm, &LAMBDAS, &cusp3_expected(2), &one_minus_t_pow(1));
}

#[test]
fn determinants_of_congruence_and_cusp() {
    let d = 10;
    for n in 1..=4 {
        let o = order(OrderSpec::Congruence { n }, 2, Flavor::Mixed, d);
        let zm = zeta_matrix(&o, &o.regular_module(), d).unwrap();
        assert_eq!(zm.size(), n as usize + 1);
        let det = det_zeta(&zm, None).unwrap();
        assert_eq!(det, RatFuncT::new(vec![Q::one()], one_minus_t_pow(2)).unwrap(), "congruence({n})");
    }
    for n in 1..=3 {
        let o = order(OrderSpec::Cusp { n }, 2, Flavor::Equal, d);
        let zm = zeta_matrix(&o, &o.regular_module(), d).unwrap();
        let det = det_zeta(&zm, None).unwrap();
        assert_eq!(det, RatFuncT::new(vec![Q::one()], one_minus_t_pow(1)).unwrap(), "cusp({n})");
    }
}

#[test]
fn product_formula_holds() {
    let d = 10;
    let o = order(OrderSpec::triangular(3), 2, Flavor::Mixed, d);
    let rep = verify_solomon2(&o, &AModule(vec![1]), d).unwrap();
    assert!(rep.verdict);
    assert_eq!(rep.factors.len(), 1);
    for n in 1..=3 {
        let o = order(OrderSpec::Congruence { n }, 3, Flavor::Mixed, d);
        let rep = verify_solomon2(&o, &o.regular_module(), d).unwrap();
        assert!(rep.verdict, "congruence({n})");
        assert!(rep.factors.iter().all(|f| f.exponent == 1 && f.p_exp == 0));
    }
    // V = A + S_1: factors (1-T)^-2 (1-pT)^-3
    let d = 12;
    let o = order(OrderSpec::Congruence { n: 2 }, 2, Flavor::Mixed, d);
    let rep = verify_solomon2(&o, &AModule(vec![2, 1]), d).unwrap();
    assert!(rep.verdict);
    let mut den = poly_mul(&one_minus_t_pow(2), &poly_pow(&[q(1), q(-2)], 3));
    den = poly_trim(den);
    assert_eq!(rep.formula, RatFuncT::new(vec![q(1)], den).unwrap().to_json());
    // empty product
    let rep = verify_solomon2(&o, &AModule(vec![0, 0]), d).unwrap();
    assert!(rep.verdict);
    assert_eq!(rep.det_series[0], "1");
}

#[test]
fn inverses_are_integer_polynomials() {
    let d = 12;
    let tiny = ZetaMatrix {
        v: AModule(vec![1]),
        d,
        classes: vec![0],
        labels: vec!["x".into()],
        entries: vec![vec![expand(vec![q(1)], &one_minus_t_pow(1), d)]],
    };
    let rep = verify_inverse_polynomial(&tiny).unwrap();
    assert!(rep.polynomial);
    assert_eq!(rep.inverse[0][0].num, vec!["1", "-1"]);
    let cases: Vec<(OrderSpec, Flavor, AModule)> = vec![
        (OrderSpec::triangular(2), Flavor::Mixed, AModule(vec![1])),
        (OrderSpec::triangular(3), Flavor::Mixed, AModule(vec![1])),
        (OrderSpec::Congruence { n: 2 }, Flavor::Mixed, AModule(vec![1, 1])),
        (OrderSpec::Congruence { n: 3 }, Flavor::Mixed, AModule(vec![1, 1])),
        (OrderSpec::Cusp { n: 3 }, Flavor::Equal, AModule(vec![1])),
    ];
    for (spec, flavor, v) in cases {
        let o = order(spec.clone(), 2, flavor, d);
        let zm = zeta_matrix(&o, &v, d).unwrap();
        let rep = verify_inverse_polynomial(&zm).unwrap();
        assert!(rep.polynomial, "{}", spec.name());
    }
}

/// Full sublattices of Lambda_1 = {(x, y) : x = y mod p} inside Z_2^2 that
/// are stable under (x, y) -> (2x, 0), by brute force over Hermite forms
/// [[2^a, b], [0, 2^c]].
fn congruence1_ideal_counts(d: usize) -> Vec<u64> {
    let mut out = vec![0u64; d + 1];
    for a in 0..=d as u32 + 1 {
        for c in 1..=d as u32 + 1 - a {
            let k = (a + c - 1) as usize;
            let mc = 1i64 << c;
            for b in 0..mc {
                let inside = (1i64 << a) % 2 == b % 2;
                // image of (2^a, b) is (2^(a+1), 0) = 2 * (2^a, b) - (0, 2b)
                let stable = (2 * b) % mc == 0;
                if inside && stable {
                    out[k] += 1;
                }
            }
        }
    }
    out
}

#[test]
fn whole_zeta_functions() {
    let d = 10;
    let o = order(OrderSpec::triangular(1), 3, Flavor::Mixed, d);
    assert_eq!(whole_zeta(&o, d).unwrap(), expand(vec![q(1)], &one_minus_t_pow(1), d));
    for p in [2u64, 3] {
        let o = order(OrderSpec::full_matrix(2), p, Flavor::Mixed, d);
        let den = poly_mul(&[q(1), q(0), q(-1)], &[q(1), q(0), -q(p as i64)]);
        assert_eq!(whole_zeta(&o, d).unwrap(), expand(vec![q(1)], &den, d), "p={p}");
    }
    let o = order(OrderSpec::Congruence { n: 1 }, 2, Flavor::Mixed, d);
    assert_eq!(whole_zeta(&o, d).unwrap(), TruncSeries::from_counts(&congruence1_ideal_counts(d)));
}

#[test]
fn functional_equation_for_gorenstein_orders() {
    let d = 12;
    for n in 1..=3 {
        let o = order(OrderSpec::Congruence { n }, 2, Flavor::Mixed, d);
        let rep = functional_equation_check(&o, d).unwrap();
        assert_eq!(rep.index_exp, n as i64);
        assert!(rep.verdict, "congruence({n})");
    }
    for n in 1..=2 {
        let o = order(OrderSpec::Cusp { n }, 2, Flavor::Equal, d);
        let rep = functional_equation_check(&o, d).unwrap();
        assert_eq!(rep.index_exp, n as i64);
        assert!(rep.verdict, "cusp({n})");
    }
    let o = order(OrderSpec::full_matrix(2), 2, Flavor::Mixed, d);
    let rep = functional_equation_check(&o, d).unwrap();
    assert_eq!(rep.index_exp, 0);
    assert!(rep.verdict);
}

#[test]
fn column_sums_count_all_sublattices() {
    let d = 8;
    let o = order(OrderSpec::Congruence { n: 2 }, 2, Flavor::Mixed, d);
    let v = o.regular_module();
    let cat = o.iso_catalog(&v).unwrap();
    let zm = zeta_matrix(&o, &v, d).unwrap();
    for (r, &k) in zm.classes.iter().enumerate() {
        let l = &cat.classes[k].lattice;
        let mut total = vec![0u64; d + 1];
        o.for_each_level(l, d, &mut |k, level| {
            total[k] = level.len() as u64;
            Ok(())
        })
        .unwrap();
        let mut sum = TruncSeries::zero(d);
        for e in &zm.entries[r] {
            sum = sum.add(e);
        }
        assert_eq!(sum, TruncSeries::from_counts(&total));
    }
}

#[test]
fn flavors_give_the_same_reports() {
    let d = 8;
    for spec in [OrderSpec::Congruence { n: 2 }, OrderSpec::triangular(2)] {
        let v = order(spec.clone(), 3, Flavor::Mixed, d).regular_module();
        let reps: Vec<_> = [Flavor::Mixed, Flavor::Equal]
            .into_iter()
            .map(|f| {
                let o = order(spec.clone(), 3, f, d);
                let r = verify_solomon2(&o, &v, d).unwrap();
                (r.verdict, r.det_series, zeta_matrix(&o, &v, d).unwrap().entries)
            })
            .collect();
        assert_eq!(reps[0], reps[1], "{}", spec.name());
    }
}

fn one_step(o: &Order, v: &AModule, removed: &str) -> BlockStep {
    let ind = o.ind_lattices(Some(v)).unwrap();
    let c: Vec<IndRef> = ind.entries.iter().map(|e| e.at.clone()).collect();
    let x = ind.entries.iter().find(|e| e.label == removed).unwrap();
    let rest: Vec<&IndEntry> = ind.entries.iter().filter(|e| e.label != removed).collect();
    let approx = o.trace(&x.lattice, &rest.iter().map(|e| e.lattice.clone()).collect::<Vec<_>>()).unwrap();
    BlockStep { c, c_prime: rest.iter().map(|e| e.at.clone()).collect(), removed: x.at.clone(), approx }
}

#[test]
fn block_lemma_on_the_first_chain_step() {
    let d = 10;
    for (spec, flavor) in [(OrderSpec::Cusp { n: 3 }, Flavor::Equal), (OrderSpec::Congruence { n: 3 }, Flavor::Mixed)] {
        let o = order(spec.clone(), 2, flavor, d);
        let v = o.regular_module();
        let step = one_step(&o, &v, "Λ_3");
        let rep = verify_block_lemma(&o, &step, &v, d).unwrap();
        assert!(rep.verdict, "{}", spec.name());
        assert_eq!(rep.approx_index_exp, 1);
        let r = rep.labels.iter().position(|l| l == "Λ_3").unwrap();
        for (c, e) in rep.transformed[r].iter().enumerate() {
            let want = if c == r { vec!["1".to_string()] } else { vec![] };
            let got: Vec<String> = e.iter().rev().skip_while(|x| *x == "0").cloned().collect::<Vec<_>>();
            let got: Vec<String> = got.into_iter().rev().collect();
            assert_eq!(got, want, "{} column {}", spec.name(), rep.labels[c]);
        }
        // other rows are untouched
        let zm = zeta_matrix(&o, &v, d).unwrap();
        let other = rep.labels.iter().position(|l| l == "Λ_1").unwrap();
        let zr = zm.position("Λ_1").unwrap();
        assert_eq!(rep.transformed[other], zm.entries[zr].iter().map(|s| s.to_strings()).collect::<Vec<_>>());
    }
}

#[test]
fn block_lemma_with_a_nonzero_complement() {
    let d = 8;
    let o = order(OrderSpec::triangular(2), 2, Flavor::Mixed, d);
    let v = o.regular_module();
    let step = one_step(&o, &v, "P_1");
    let rep = verify_block_lemma(&o, &step, &v, d).unwrap();
    assert!(rep.zero_block_ok);
    assert!(rep.diagonal_block_ok);
}

#[test]
fn maximal_order_has_no_chain_step() {
    let d = 6;
    let o = order(OrderSpec::triangular(1), 2, Flavor::Mixed, d);
    let v = o.regular_module();
    let ind = o.ind_lattices(Some(&v)).unwrap();
    assert_eq!(ind.entries.len(), 1);
    let x = &ind.entries[0];
    let step = BlockStep {
        c: vec![x.at.clone()],
        c_prime: vec![x.at.clone()],
        removed: x.at.clone(),
        approx: x.lattice.clone(),
    };
    assert!(matches!(verify_block_lemma(&o, &step, &v, d), Err(ZetaError::EmptyChainStep(_))));
}
