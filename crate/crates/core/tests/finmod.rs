use ordzeta::finmod::fp::*;
use ordzeta::finmod::*;
use proptest::prelude::*;

fn sample_algebras() -> Vec<(&'static str, FinAlgebra)> {
    let mut v = vec![];
    for &p in &[2u64, 3] {
        v.push(("T2", FinAlgebra::upper_triangular(p, 2)));
        v.push(("T3", FinAlgebra::upper_triangular(p, 3)));
        v.push(("x^3", FinAlgebra::truncated_poly(p, 3)));
        v.push(("C2", FinAlgebra::cyclic_group(p, 2)));
        v.push(("C3", FinAlgebra::cyclic_group(p, 3)));
        v.push(("M2", FinAlgebra::matrix_algebra(p, 2)));
        v.push(("FxF", FinAlgebra::product(&FinAlgebra::truncated_poly(p, 1), &FinAlgebra::truncated_poly(p, 1))));
        v.push((
            "x^2 x T2",
            FinAlgebra::product(&FinAlgebra::truncated_poly(p, 2), &FinAlgebra::upper_triangular(p, 2)),
        ));
    }
    v.push(("C4", FinAlgebra::cyclic_group(2, 4)));
    v.push(("C2xC2-ish", FinAlgebra::product(&FinAlgebra::cyclic_group(2, 2), &FinAlgebra::cyclic_group(2, 2))));
    // Kronecker-type quiver with a loop killed at length 2
    v.push(("quiver", FinAlgebra::path_algebra(2, 2, &[(0, 1), (0, 1), (1, 1)], &[vec![2, 2]], 4).unwrap()));
    v
}

#[test]
fn radical_matches_exhaustive_oracle() {
    for (name, a) in sample_algebras() {
        if a.dim > 9 {
            continue;
        }
        let j = a.radical().clone();
        let brute = radical_bruteforce(&a);
        assert_eq!(j, brute, "radical mismatch for {name} over F_{}", a.p);
    }
}

#[test]
fn radical_is_nilpotent_with_semisimple_quotient() {
    for (name, a) in sample_algebras() {
        let j = a.radical().clone();
        // J^k = 0 for k <= dim
        let mut pw = j.clone();
        let mut k = 1;
        while !pw.is_empty() {
            pw = a.span_products(&pw, &j);
            k += 1;
            assert!(k <= a.dim + 1, "radical of {name} not nilpotent");
        }
        if j.len() < a.dim {
            let (q, _) = a.quotient(&j).unwrap();
            assert!(q.radical().is_empty(), "A/J not semisimple for {name}");
        }
    }
}

#[test]
fn radical_examples() {
    assert_eq!(FinAlgebra::upper_triangular(5, 2).radical().len(), 1);
    assert_eq!(
        FinAlgebra::product(&FinAlgebra::truncated_poly(7, 1), &FinAlgebra::truncated_poly(7, 1)).radical().len(),
        0
    );
    let a = FinAlgebra::truncated_poly(2, 3);
    assert_eq!(a.radical(), &vec![vec![0, 1, 0], vec![0, 0, 1]]);
    // group algebra in the modular case: F_3[C_3] = F_3[x]/(x-1)^3
    assert_eq!(FinAlgebra::cyclic_group(3, 3).radical().len(), 2);
    assert_eq!(FinAlgebra::cyclic_group(2, 3).radical().len(), 0);
}

#[test]
fn hom_examples() {
    let a = FinAlgebra::upper_triangular(3, 2);
    let bd = basic_data(&a, Budget::default()).unwrap();
    assert_eq!(bd.simples.len(), 2);
    for (i, s) in bd.simples.iter().enumerate() {
        for (j, t) in bd.simples.iter().enumerate() {
            assert_eq!(hom_space(&a, s, t).len(), (i == j) as usize);
        }
    }
    let reg = FinModule::regular(&a);
    for m in bd.projectives.iter().chain(&bd.simples) {
        assert_eq!(hom_space(&a, &reg, m).len(), m.dim);
    }
}

#[test]
fn decompose_regular_of_product() {
    let a = FinAlgebra::product(&FinAlgebra::truncated_poly(2, 1), &FinAlgebra::truncated_poly(2, 1));
    let parts = decompose(&a, &FinModule::regular(&a), Budget::default()).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|(m, _)| m.dim == 1));
}

#[test]
fn submodule_counts() {
    // S^2 over F_p (trivial action): p + 3 subspaces of F_p^2
    for &p in &[2u64, 3, 5] {
        let a = FinAlgebra::truncated_poly(p, 1);
        let s = FinModule::regular(&a);
        let s2 = FinModule::direct_sum(&[&s, &s]);
        assert_eq!(submodules(&a, &s2, 1000).unwrap().len() as u64, p + 3);
        assert_eq!(submodules(&a, &s, 1000).unwrap().len(), 2);
    }
    let a = FinAlgebra::truncated_poly(2, 2);
    assert_eq!(submodules(&a, &FinModule::regular(&a), 1000).unwrap().len(), 3);
    let a = FinAlgebra::truncated_poly(2, 1);
    let s = FinModule::regular(&a);
    let big = FinModule::direct_sum(&[&s, &s, &s, &s]);
    assert!(matches!(submodules(&a, &big, 10), Err(FinError::BudgetExceeded(_))));
}

#[test]
fn homological_examples() {
    let b = Budget::default();
    let h = homological(&FinAlgebra::truncated_poly(5, 1), 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Finite(0));
    let h = homological(&FinAlgebra::upper_triangular(2, 2), 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Finite(1));
    let h = homological(&FinAlgebra::upper_triangular(3, 3), 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Finite(1));
    let h = homological(&FinAlgebra::truncated_poly(2, 2), 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Infinite);
    assert!(matches!(h.dom_dim, DomDim::Infinite | DomDim::AtLeast(_)));
    // linear A_3 path algebra without relations is hereditary
    let a = FinAlgebra::path_algebra(2, 3, &[(0, 1), (1, 2)], &[], 3).unwrap();
    let h = homological(&a, 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Finite(1));
    // with the length-2 path killed: gl.dim 2
    let a = FinAlgebra::path_algebra(2, 3, &[(0, 1), (1, 2)], &[vec![0, 1]], 3).unwrap();
    let h = homological(&a, 6, b).unwrap();
    assert_eq!(h.gl_dim, PdValue::Finite(2));
}

#[test]
fn idempotents_found_without_hints() {
    // cyclic group algebra over F_2 of order 3 splits as F_2 x F_4
    let a = FinAlgebra::cyclic_group(2, 3);
    let e = primitive_idempotents(&a, Budget::default()).unwrap();
    assert_eq!(e.len(), 2);
    for x in &e {
        assert_eq!(a.mul(x, x), *x);
    }
    let bd = basic_data(&a, Budget::default()).unwrap();
    let mut dims: Vec<usize> = bd.end_dims.clone();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
}

fn random_module(p: u64, k: usize, seed: u64) -> (FinAlgebra, FinModule) {
    // a quotient of a free module over the truncated polynomial algebra
    let a = FinAlgebra::truncated_poly(p, k);
    let reg = FinModule::regular(&a);
    let free = FinModule::direct_sum(&[&reg, &reg]);
    let v: Vec<u64> = (0..free.dim).map(|i| (seed >> i) % p).collect();
    let sub = free.closure(&a, &vec![v]);
    let (q, _) = free.quotient(&sub);
    (a, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hom_is_additive(s1 in 0u64..4096, s2 in 0u64..4096, s3 in 0u64..4096) {
        let (a, m) = random_module(2, 3, s1);
        let (_, n1) = random_module(2, 3, s2);
        let (_, n2) = random_module(2, 3, s3);
        let sum = FinModule::direct_sum(&[&n1, &n2]);
        prop_assert_eq!(hom_space(&a, &m, &sum).len(), hom_space(&a, &m, &n1).len() + hom_space(&a, &m, &n2).len());
        for h in hom_space(&a, &m, &n1) {
            for g in a.generators() {
                prop_assert_eq!(fmul(2, &n1.action_of(g), &h), fmul(2, &h, &m.action_of(g)));
            }
        }
    }

    #[test]
    fn decompose_is_idempotent(s in 0u64..4096) {
        let (a, m) = random_module(2, 3, s);
        let parts = decompose(&a, &m, Budget::default()).unwrap();
        prop_assert_eq!(parts.iter().map(|(x, _)| x.dim).sum::<usize>(), m.dim);
        for (x, _) in &parts {
            let again = decompose(&a, x, Budget::default()).unwrap();
            prop_assert_eq!(again.len(), 1);
            prop_assert!(is_indecomposable(&a, x, Budget::default()).unwrap());
        }
    }

    #[test]
    fn pd_is_stable_under_budget_seed(seed in 0u64..100) {
        let a = FinAlgebra::path_algebra(3, 3, &[(0, 1), (1, 2)], &[vec![0, 1]], 3).unwrap();
        let b1 = Budget { seed, ..Budget::default() };
        let b2 = Budget { seed: seed + 7, exhaustive: 1, samples: 512 };
        let bd = basic_data(&a, b1).unwrap();
        for s in &bd.simples {
            prop_assert_eq!(proj_dim(&a, &bd, s, 5, b1), proj_dim(&a, &bd, s, 5, b2));
        }
    }
}
