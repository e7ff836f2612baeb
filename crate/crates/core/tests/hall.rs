use std::collections::BTreeMap;

use proptest::prelude::*;

use ordzeta::exactarith::{ChainRing, Flavor};
use ordzeta::finmod::Budget;
use ordzeta::hall::*;
use ordzeta::orders::*;

fn mp(parts: &[&[usize]]) -> MultiPartition {
    MultiPartition(parts.iter().map(|p| p.to_vec()).collect()).normalized()
}

fn order(spec: OrderSpec, p: u64, d: usize) -> Order {
    Order::new(&spec, ChainRing::new(p, d as u32 + 4, Flavor::Mixed).unwrap(), Budget::default()).unwrap()
}

/// Lines in F_q^2 by listing nonzero vectors up to scalars.
fn lines_in_plane(q: usize) -> u64 {
    ((q * q - 1) / (q - 1)) as u64
}

#[test]
fn lines_in_the_plane() {
    let s = mp(&[&[1]]);
    let ss = mp(&[&[1, 1]]);
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let f = Gf::new(q).unwrap();
        assert_eq!(hall_number(&f, &s, &s, &ss).unwrap(), lines_in_plane(q), "q={q}");
        assert_eq!(hall_number(&f, &s, &s, &mp(&[&[2]])).unwrap(), 1);
    }
}

#[test]
fn field_tables_are_fields() {
    for q in [4, 8, 9, 16] {
        let f = Gf::new(q).unwrap();
        for a in 1..q as u16 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            for b in 0..q as u16 {
                for c in 0..q as u16 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
    assert!(matches!(Gf::new(6), Err(HallError::BadField(_))));
}

#[test]
fn uniserial_of_length_two() {
    // Y = S_{1,2}: top S_1, socle S_2; the only proper subrep is the socle
    let y = MultiPartition::segment(2, 0, 2);
    let s1 = MultiPartition::simple(2, 0);
    let s2 = MultiPartition::simple(2, 1);
    for q in [2, 3, 4] {
        let f = Gf::new(q).unwrap();
        assert_eq!(hall_number(&f, &s1, &s2, &y).unwrap(), 1);
        assert_eq!(hall_number(&f, &s2, &s1, &y).unwrap(), 0);
    }
    assert_eq!(hall_polynomial(&s1, &s2, &y).unwrap(), vec![1]);
}

#[test]
fn empty_type_is_the_identity() {
    let e = MultiPartition::empty(2);
    let mu = mp(&[&[2], &[1]]);
    let f = Gf::new(3).unwrap();
    assert_eq!(hall_number(&f, &e, &mu, &mu).unwrap(), 1);
    assert_eq!(hall_number(&f, &e, &mp(&[&[1, 1], &[1]]), &mu).unwrap(), 0);
    let x: HallElem = BTreeMap::from([(mu.clone(), 2)]);
    let one: HallElem = BTreeMap::from([(e, 1)]);
    assert_eq!(hall_product_at(&f, &one, &x).unwrap(), x);
}

#[test]
fn square_of_the_simple_at_q2() {
    let s = mp(&[&[1]]);
    let f = Gf::new(2).unwrap();
    let x: HallElem = BTreeMap::from([(s, 1)]);
    let got = hall_product_at(&f, &x, &x).unwrap();
    assert_eq!(got, BTreeMap::from([(mp(&[&[1, 1]]), 3), (mp(&[&[2]]), 1)]));
}

#[test]
fn hall_polynomials_and_the_held_out_field() {
    let s = mp(&[&[1]]);
    assert_eq!(hall_polynomial(&s, &s, &mp(&[&[1, 1]])).unwrap(), vec![1, 1]);
    let f7 = Gf::new(HELD_OUT).unwrap();
    let cases = [
        (mp(&[&[1]]), mp(&[&[1]]), mp(&[&[1, 1]])),
        (mp(&[&[1]]), mp(&[&[1, 1]]), mp(&[&[1, 1, 1]])),
        (mp(&[&[1]]), mp(&[&[2]]), mp(&[&[2, 1]])),
        (mp(&[&[2]]), mp(&[&[1]]), mp(&[&[2, 1]])),
        (mp(&[&[1], &[]]), mp(&[&[1], &[]]), mp(&[&[1, 1], &[]])),
        (mp(&[&[1], &[]]), mp(&[&[], &[1]]), mp(&[&[], &[2]])),
        (mp(&[&[], &[1]]), mp(&[&[1], &[1]]), mp(&[&[1], &[2]])),
    ];
    for (l, n, m) in cases {
        let p = hall_polynomial(&l, &n, &m).unwrap();
        let fresh = hall_number(&f7, &l, &n, &m).unwrap() as i64;
        assert_eq!(zpoly_eval(&p, 7), fresh, "{l} {n} {m}: {p:?}");
    }
}

#[test]
fn iso_types_of_built_modules_round_trip() {
    let f = Gf::new(3).unwrap();
    for d in [vec![2, 1], vec![1, 1], vec![2, 2], vec![3, 1]] {
        for m in partitions_with_dim(&d) {
            let r = Rep::from_partition(&m);
            assert_eq!(rep_iso_type(&f, &r).unwrap(), m);
            assert_eq!(m.dim_vector(), d);
        }
    }
    assert!(rep_iso_type(&f, &Rep::zero(3)).unwrap().is_empty());
    // a cycle acting invertibly
    let mut r = Rep::zero(1);
    r.dims = vec![1];
    r.maps = vec![vec![vec![1]]];
    assert!(matches!(rep_iso_type(&f, &r), Err(HallError::NotNilpotent(_))));
}

#[test]
fn submodule_totals_match_direct_enumeration() {
    // summing F^mu_{lambda nu} over lambda, nu counts every subrep once
    let f = Gf::new(2).unwrap();
    let mu = mp(&[&[2], &[1]]);
    let y = Rep::from_partition(&mu);
    let dm = mu.dim_vector();
    for a in 0..=dm[0] {
        for b in 0..=dm[1] {
            let mut direct = 0u64;
            for_each_subrep(&f, &y, &[a, b], &mut |_| direct += 1).unwrap();
            let mut total = 0u64;
            for nu in partitions_with_dim(&[a, b]) {
                for l in partitions_with_dim(&[dm[0] - a, dm[1] - b]) {
                    total += hall_number(&f, &l, &nu, &mu).unwrap();
                }
            }
            assert_eq!(total, direct, "dims ({a},{b})");
        }
    }
}

#[test]
fn associativity_in_the_hall_algebra() {
    let f = Gf::new(2).unwrap();
    let s1: HallElem = BTreeMap::from([(MultiPartition::simple(2, 0), 1)]);
    let s2: HallElem = BTreeMap::from([(MultiPartition::simple(2, 1), 1)]);
    let left = hall_product_at(&f, &hall_product_at(&f, &s1, &s2).unwrap(), &s1).unwrap();
    let right = hall_product_at(&f, &s1, &hall_product_at(&f, &s2, &s1).unwrap()).unwrap();
    assert_eq!(left, right);
    let g1: GenericElem = BTreeMap::from([(MultiPartition::simple(1, 0), vec![1])]);
    let l = generic_product(&generic_product(&g1, &g1).unwrap(), &g1).unwrap();
    let r = generic_product(&g1, &generic_product(&g1, &g1).unwrap()).unwrap();
    assert_eq!(l, r);
    // u_S^3 = [3]! u_{111} + ... ; the coefficient of u_{(1,1,1)} is (1+T)(1+T+T^2)
    assert_eq!(l[&mp(&[&[1, 1, 1]])], vec![1, 2, 2, 1]);
}

#[test]
fn generic_module_basis_and_simple_action() {
    for (n, m) in [(1, 3), (2, 3), (3, 2), (4, 1)] {
        let g = generic_action(n, m, &MultiPartition::simple(n, 0)).unwrap();
        assert_eq!(g.basis.len(), binomial(m + n - 1, n - 1));
        // u_{S_a} u_nu = [nu_a + 1]_T u_{nu + e_a - e_{a-1}}
        for (j, nu) in g.basis.iter().enumerate() {
            let prev = (n - 1) % n;
            for (i, mu) in g.basis.iter().enumerate() {
                let mut want = vec![];
                if n > 1 && nu[prev] > 0 {
                    let mut t = nu.clone();
                    t[0] += 1;
                    t[prev] -= 1;
                    if &t == mu {
                        want = vec![1; nu[0] + 1];
                    }
                } else if n == 1 && mu == nu {
                    want = vec![1; nu[0]];
                }
                assert_eq!(g.entries[i][j], want, "n={n} nu={nu:?} mu={mu:?}");
            }
        }
    }
}

#[test]
fn generic_module_is_associative() {
    // u_{S_1} (u_{S_2} v) against (u_{S_1} u_{S_2}) v with the product expanded
    let (n, m) = (2, 2);
    let a1 = generic_action(n, m, &MultiPartition::simple(n, 0)).unwrap();
    let a2 = generic_action(n, m, &MultiPartition::simple(n, 1)).unwrap();
    let s1: GenericElem = BTreeMap::from([(MultiPartition::simple(n, 0), vec![1])]);
    let s2: GenericElem = BTreeMap::from([(MultiPartition::simple(n, 1), vec![1])]);
    let prod = generic_product(&s1, &s2).unwrap();
    let d = a1.basis.len();
    let mut lhs = vec![vec![Vec::<i64>::new(); d]; d];
    for (lambda, coef) in &prod {
        let a = generic_action(n, m, lambda).unwrap();
        for i in 0..d {
            for j in 0..d {
                lhs[i][j] = padd(&lhs[i][j], &zpoly_mul(coef, &a.entries[i][j]));
            }
        }
    }
    let mut rhs = vec![vec![Vec::<i64>::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                rhs[i][j] = padd(&rhs[i][j], &zpoly_mul(&a1.entries[i][k], &a2.entries[k][j]));
            }
        }
    }
    assert_eq!(lhs, rhs);
}

fn padd(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

#[test]
fn lattice_count_agrees_with_the_generic_module() {
    // n = 2, m = 1, q = 2: u_{S_1} u_{(0,1)} from lattices of the triangular order
    let d = 2;
    let o = order(OrderSpec::triangular(2), 2, d);
    let v = AModule(vec![1]);
    let rep = verify_prop51(&o, &v, d).unwrap();
    let p1 = o.column_lattice(0).unwrap();
    let rad = o.maximal_sublattices(&p1).unwrap();
    assert_eq!(rad.len(), 1);
    let fp = layer_fingerprint(&o, &p1, &rad[0]).unwrap();
    let counts = action_of_type(&rep, &fp).unwrap();
    let i1 = rep.labels.iter().position(|l| l == "P_1").unwrap();
    let i2 = rep.labels.iter().position(|l| l == "P_2").unwrap();
    let g = generic_action(2, 1, &MultiPartition::simple(2, 0)).unwrap();
    let c1 = g.basis.iter().position(|b| b == &vec![1, 0]).unwrap();
    let c2 = g.basis.iter().position(|b| b == &vec![0, 1]).unwrap();
    for (li, ci) in [(i1, c1), (i2, c2)] {
        for (lj, cj) in [(i1, c1), (i2, c2)] {
            assert_eq!(counts[li][lj] as i64, zpoly_eval(&g.entries[ci][cj], 2));
        }
    }
    assert_eq!(counts[i1][i2], 1);
}

#[test]
fn zeta_matrix_from_the_hall_module() {
    let d = 6;
    let o = order(OrderSpec::Congruence { n: 2 }, 2, d);
    let rep = verify_prop51(&o, &o.regular_module(), d).unwrap();
    assert!(rep.verdict);
    let o = order(OrderSpec::triangular(2), 2, d);
    let rep = verify_prop51(&o, &AModule(vec![1]), d).unwrap();
    assert!(rep.verdict);
    let rep = verify_prop51(&o, &AModule(vec![1]), 0).unwrap();
    assert!(rep.verdict);
    assert_eq!(rep.types.len(), 1);
}

#[test]
fn lie_algebra_checks() {
    for m in 0..=5 {
        let r = lie_check(2, m).unwrap();
        assert_eq!(r.dimension, m + 1);
        let sl2 = r.sl2.as_ref().unwrap();
        assert!(sl2.he_ok && sl2.hf_ok);
        let want: Vec<i64> = (0..=m as i64).map(|k| m as i64 - 2 * k).collect();
        assert_eq!(sl2.spectrum, want);
        assert!(r.irreducible, "m={m}");
        assert!(r.verdict);
    }
    for m in 1..=3 {
        let r = lie_check(3, m).unwrap();
        assert_eq!(r.dimension, binomial(m + 2, 2));
        assert!(r.irreducible && r.verdict, "m={m}");
    }
    let r = lie_check(4, 2).unwrap();
    assert_eq!(r.nonadjacent_commute, Some(true));
    assert!(r.verdict);
}

fn arb_partition() -> impl Strategy<Value = MultiPartition> {
    prop::collection::vec(prop::collection::vec(1usize..=3, 0..=2), 2..=2)
        .prop_map(|v| MultiPartition(v).normalized())
        .prop_filter("small", |m| m.size() <= 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn built_modules_recover_their_type(m in arb_partition(), q in prop::sample::select(vec![2usize, 3, 4])) {
        let f = Gf::new(q).unwrap();
        prop_assert_eq!(rep_iso_type(&f, &Rep::from_partition(&m)).unwrap(), m);
    }

    #[test]
    fn sub_and_quotient_dimensions_add_up(m in arb_partition()) {
        let f = Gf::new(2).unwrap();
        let y = Rep::from_partition(&m);
        let d = m.dim_vector();
        let w = vec![d[0] / 2, d[1] / 2];
        for_each_subrep(&f, &y, &w, &mut |s| {
            let a = rep_iso_type(&f, &sub_rep(&f, &y, s)).unwrap();
            let b = rep_iso_type(&f, &quotient_rep(&f, &y, s)).unwrap();
            let sum: Vec<usize> = a.dim_vector().iter().zip(b.dim_vector()).map(|(x, y)| x + y).collect();
            assert_eq!(sum, d);
        }).unwrap();
    }
}
