//! The acceptance suite. Each criterion returns named checks; a criterion
//! passes when all of them do.

use serde::Serialize;

use ordzeta::exactarith::*;
use ordzeta::finmod::{Budget, FinAlgebra, PdValue};
use ordzeta::hall::*;
use ordzeta::orders::*;
use ordzeta::qha::*;
use ordzeta::zeta::*;

use crate::status::{check, check_with, Check, Status, TaskError};

/// Deliberate faults for negative-control runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Adds 1 to the T coefficient of one computed tiled zeta entry.
    ZetaCoefficient,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub budget: Budget,
    pub enum_opts: EnumOptions,
    pub mutation: Option<Mutation>,
    /// Criterion numbers to run; all when None.
    pub only: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<TaskError>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS".to_string(),
            Status::Fail => {
                let bad = self.checks.iter().filter(|c| !c.pass).count();
                format!("FAIL ({bad} of {} checks)", self.checks.len())
            }
            Status::Error => {
                let e = self.error.as_ref().unwrap();
                format!("ERROR {} {}", e.error, e.message)
            }
        };
        format!("criterion {:>2}  {}  {tag}", self.id, self.title)
    }
}

type Outcome = Result<Vec<Check>, TaskError>;

pub const TITLES: [&str; 15] = [
    "tiled triangular zeta matrices and determinants",
    "congruence(3) zeta matrix and determinants",
    "cusp(3) zeta matrix and determinants",
    "product formula for the determinant",
    "inverse zeta matrices are integer polynomials",
    "Hall module action equals the zeta matrix",
    "block lemma on single-class chain steps",
    "Hall polynomials and the held-out field",
    "generic Hall module and sl_n checks",
    "radical layer chains of F_2[x]/x^m",
    "iterated radical chains on A + D(A)",
    "Auslander algebra of F_2[x]/x^3",
    "lattice catalogs and one-point rejection",
    "functional equation for congruence orders",
    "flavor robustness of criteria 1 to 4",
];

struct Ctx<'a> {
    opts: &'a VerifyOptions,
}

impl Ctx<'_> {
    fn order(&self, spec: OrderSpec, p: u64, flavor: Flavor, d: usize) -> Result<Order, TaskError> {
        let ring = ChainRing::new(p, d as u32 + 4, flavor)?;
        Ok(Order::new(&spec, ring, self.opts.budget)?.with_enum_options(self.opts.enum_opts))
    }
}

fn one_minus_t_pow(k: usize) -> Vec<Q> {
    poly_pow(&[q(1), q(-1)], k)
}

/// 1 - T^n
fn one_minus_t_n(n: usize) -> Vec<Q> {
    let mut den = vec![q(0); n + 1];
    den[0] = q(1);
    den[n] = q(-1);
    den
}

fn expand(num: &[i64], den: &[Q], d: usize) -> TruncSeries {
    let num: Vec<Q> = num.iter().map(|&c| q(c)).collect();
    RatFuncT::new(num, den.to_vec()).expect("nonzero denominator").expand(d)
}

fn rat(num: &[Q], den: &[Q]) -> RatFuncT {
    RatFuncT::new(num.to_vec(), den.to_vec()).expect("nonzero denominator")
}

fn show(r: &RatFuncT) -> String {
    let j = r.to_json();
    format!("num {:?} den {:?}", j.num, j.den)
}

/// Compares the matrix entries against numerators over a common
/// denominator, rows and columns in `labels` order.
fn matrix_checks(name: &str, zm: &ZetaMatrix, labels: &[&str], want: &[Vec<Vec<i64>>], den: &[Q]) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, li) in labels.iter().enumerate() {
        for (j, lj) in labels.iter().enumerate() {
            let got = match (zm.position(li), zm.position(lj)) {
                (Some(r), Some(c)) => Some(&zm.entries[r][c]),
                _ => None,
            };
            let expect = expand(&want[i][j], den, zm.d);
            out.push(check(format!("{name} Z({li}, {lj})"), got == Some(&expect)));
        }
    }
    out
}

const LAMBDAS: [&str; 4] = ["Λ_3", "Λ_2", "Λ_1", "Λ_0"];

/// Displayed congruence(3) matrix, numerators over (1-T)^2.
fn congruence3_expected(p: i64) -> Vec<Vec<Vec<i64>>> {
    let (p2, p3) = (p * p, p * p * p);
    vec![
        vec![
            vec![1, -2, p + 1, -2 * p, p2 + p, -2 * p2, p3],
            vec![0, 1, -2, p + 1, -2 * p, p2],
            vec![0, 0, 1, -2, p],
            vec![0, 0, 0, 1],
        ],
        vec![vec![0, p, -2 * p, p2 + p, -2 * p2, p3], vec![1, -2, p + 1, -2 * p, p2], vec![0, 1, -2, p], vec![0, 0, 1]],
        vec![vec![0, 0, p2, -2 * p2, p3], vec![0, p, -2 * p, p2], vec![1, -2, p], vec![0, 1]],
        vec![vec![0, 0, 0, p3 - p2], vec![0, 0, p2 - p], vec![0, p - 1], vec![1]],
    ]
}

/// Displayed cusp(3) matrix, numerators over 1-T.
fn cusp3_expected(p: i64) -> Vec<Vec<Vec<i64>>> {
    let (p2, p3) = (p * p, p * p * p);
    vec![
        vec![vec![1, -1, p, -p, p2, -p2, p3], vec![0, 1, -1, p, -p, p2], vec![0, 0, 1, -1, p], vec![0, 0, 0, 1]],
        vec![vec![0, p, -p, p2, -p2, p3], vec![1, -1, p, -p, p2], vec![0, 1, -1, p], vec![0, 0, 1]],
        vec![vec![0, 0, p2, -p2, p3], vec![0, p, -p, p2], vec![1, -1, p], vec![0, 1]],
        vec![vec![0, 0, 0, p3], vec![0, 0, p2], vec![0, p], vec![1]],
    ]
}

/// The instances of criteria 1 to 3, as (spec, prime, default flavor, V, d).
fn zeta_instances() -> Vec<(OrderSpec, u64, Flavor, Option<AModule>, usize)> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for p in [2u64, 3] {
            out.push((OrderSpec::triangular(n), p, Flavor::Mixed, Some(AModule(vec![1])), 11));
        }
    }
    for n in 1..=4 {
        out.push((OrderSpec::Congruence { n }, 2, Flavor::Mixed, None, 10));
    }
    for n in 1..=3 {
        out.push((OrderSpec::Cusp { n }, 2, Flavor::Equal, None, 10));
    }
    out
}

fn c1(ctx: &Ctx, flavor: Option<Flavor>) -> Outcome {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for p in [2u64, 3] {
            let d = 11;
            let o = ctx.order(OrderSpec::triangular(n), p, flavor.unwrap_or(Flavor::Mixed), d)?;
            let mut zm = zeta_matrix(&o, &AModule(vec![1]), d)?;
            if ctx.opts.mutation == Some(Mutation::ZetaCoefficient) && (n, p) == (2, 2) {
                zm.entries[0][0].c[1] += q(1);
            }
            let den = one_minus_t_n(n);
            let name = format!("triangular({n}) p={p}");
            out.push(check(format!("{name} size"), zm.size() == n));
            for i in 0..n {
                for j in 0..n {
                    let e = (i + n - j) % n;
                    let mut num = vec![0i64; e + 1];
                    num[e] = 1;
                    let (li, lj) = (format!("P_{}", i + 1), format!("P_{}", j + 1));
                    let got = zm.position(&li).zip(zm.position(&lj)).map(|(r, c)| &zm.entries[r][c]);
                    out.push(check(format!("{name} Z({li}, {lj})"), got == Some(&expand(&num, &den, d))));
                }
            }
            let det = det_zeta(&zm, None)?;
            let want = rat(&[q(1)], &den);
            out.push(check_with(format!("{name} det"), det == want, show(&det)));
        }
    }
    Ok(out)
}

fn c2(ctx: &Ctx, flavor: Option<Flavor>) -> Outcome {
    let f = flavor.unwrap_or(Flavor::Mixed);
    let d = 10;
    let o = ctx.order(OrderSpec::Congruence { n: 3 }, 2, f, d)?;
    let zm = zeta_matrix(&o, &o.regular_module(), d)?;
    let mut out = vec![check("congruence(3) size", zm.size() == 4)];
    out.extend(matrix_checks("congruence(3)", &zm, &LAMBDAS, &congruence3_expected(2), &one_minus_t_pow(2)));
    for n in 1..=4 {
        let o = ctx.order(OrderSpec::Congruence { n }, 2, f, d)?;
        let zm = zeta_matrix(&o, &o.regular_module(), d)?;
        let det = det_zeta(&zm, None)?;
        out.push(check_with(format!("congruence({n}) det"), det == rat(&[q(1)], &one_minus_t_pow(2)), show(&det)));
    }
    Ok(out)
}

fn c3(ctx: &Ctx, flavor: Option<Flavor>) -> Outcome {
    let f = flavor.unwrap_or(Flavor::Equal);
    let d = 10;
    let o = ctx.order(OrderSpec::Cusp { n: 3 }, 2, f, d)?;
    let zm = zeta_matrix(&o, &o.regular_module(), d)?;
    let mut out = vec![check("cusp(3) size", zm.size() == 4)];
    out.extend(matrix_checks("cusp(3)", &zm, &LAMBDAS, &cusp3_expected(2), &one_minus_t_pow(1)));
    for n in 1..=3 {
        let o = ctx.order(OrderSpec::Cusp { n }, 2, f, d)?;
        let zm = zeta_matrix(&o, &o.regular_module(), d)?;
        let det = det_zeta(&zm, None)?;
        out.push(check_with(format!("cusp({n}) det"), det == rat(&[q(1)], &one_minus_t_pow(1)), show(&det)));
    }
    Ok(out)
}

fn c4(ctx: &Ctx, flavor: Option<Flavor>) -> Outcome {
    let mut out = Vec::new();
    let mut cases = zeta_instances();
    for v in [vec![2, 0], vec![1, 1], vec![2, 1]] {
        cases.push((OrderSpec::Congruence { n: 2 }, 2, Flavor::Mixed, Some(AModule(v)), 12));
    }
    for (spec, p, f, v, d) in cases {
        let o = ctx.order(spec.clone(), p, flavor.unwrap_or(f), d)?;
        let v = v.unwrap_or_else(|| o.regular_module());
        let rep = verify_solomon2(&o, &v, d)?;
        let detail = format!("formula num {:?} den {:?}", rep.formula.num, rep.formula.den);
        out.push(check_with(format!("{} p={p} V={:?}", spec.name(), v.0), rep.verdict, detail));
    }
    Ok(out)
}

fn c5(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for (spec, p, f, v, d) in zeta_instances() {
        let o = ctx.order(spec.clone(), p, f, d)?;
        let v = v.unwrap_or_else(|| o.regular_module());
        let zm = zeta_matrix(&o, &v, d)?;
        let rep = verify_inverse_polynomial(&zm)?;
        out.push(check(format!("{} p={p} inverse in Z[T]", spec.name()), rep.polynomial));
    }
    Ok(out)
}

fn c6(ctx: &Ctx) -> Outcome {
    let d = 6;
    let mut out = Vec::new();
    let o = ctx.order(OrderSpec::Congruence { n: 2 }, 2, Flavor::Mixed, d)?;
    let rep = verify_prop51(&o, &o.regular_module(), d)?;
    out.push(check_with("congruence(2) V=A", rep.verdict, format!("{} types", rep.types.len())));
    let o = ctx.order(OrderSpec::triangular(2), 2, Flavor::Mixed, d)?;
    let rep = verify_prop51(&o, &AModule(vec![1]), d)?;
    out.push(check_with("triangular(2) V=column", rep.verdict, format!("{} types", rep.types.len())));
    Ok(out)
}

fn c7(ctx: &Ctx) -> Outcome {
    let d = 8;
    let mut out = Vec::new();
    for (spec, f, v) in [
        (OrderSpec::Cusp { n: 3 }, Flavor::Equal, None),
        (OrderSpec::triangular(3), Flavor::Mixed, Some(AModule(vec![1]))),
    ] {
        let o = ctx.order(spec.clone(), 2, f, d)?;
        let v = v.unwrap_or_else(|| o.regular_module());
        let chain = build_cv_chain(&o, &v)?;
        out.push(check_with(
            format!("{} chain has steps", spec.name()),
            !chain.steps.is_empty(),
            format!(
                "removes {:?}, ends at {:?}",
                chain.report.steps.iter().map(|s| &s.removed).collect::<Vec<_>>(),
                chain.report.terminal
            ),
        ));
        for (k, step) in chain.steps.iter().enumerate() {
            let rep = verify_block_lemma(&o, step, &v, d)?;
            out.push(check(format!("{} step {} removes {}", spec.name(), k + 1, rep.removed), rep.verdict));
            if k == 0 && matches!(spec, OrderSpec::Cusp { .. }) {
                out.extend(cusp_first_step(ctx, &rep, d)?);
            }
        }
    }
    Ok(out)
}

/// The printed row-transformed cusp(3) matrix: the Λ_3 row becomes
/// (1, 0, 0, 0), the other rows are unchanged, and the lower right block is
/// the zeta matrix of cusp(2).
fn cusp_first_step(ctx: &Ctx, rep: &BlockReport, d: usize) -> Outcome {
    let mut want = cusp3_expected(2);
    want[0] = vec![vec![1, -1], vec![], vec![], vec![]];
    let den = one_minus_t_pow(1);
    let entry = |a: &str, b: &str| -> Option<&Vec<String>> {
        let r = rep.labels.iter().position(|l| l == a)?;
        let c = rep.labels.iter().position(|l| l == b)?;
        Some(&rep.transformed[r][c])
    };
    let mut ok = true;
    for (i, a) in LAMBDAS.iter().enumerate() {
        for (j, b) in LAMBDAS.iter().enumerate() {
            ok &= entry(a, b) == Some(&expand(&want[i][j], &den, d).to_strings());
        }
    }
    let o2 = ctx.order(OrderSpec::Cusp { n: 2 }, 2, Flavor::Equal, d)?;
    let z2 = zeta_matrix(&o2, &o2.regular_module(), d)?;
    let mut block = true;
    for a in &LAMBDAS[1..] {
        for b in &LAMBDAS[1..] {
            let small = z2.position(a).zip(z2.position(b)).map(|(r, c)| z2.entries[r][c].to_strings());
            block &= small.is_some() && entry(a, b) == small.as_ref();
        }
    }
    Ok(vec![
        check("cusp(3) first step matches the printed matrix", ok),
        check("cusp(3) lower block is Z of cusp(2)", block),
    ])
}

fn mp(v: &[&[usize]]) -> MultiPartition {
    MultiPartition(v.iter().map(|p| p.to_vec()).collect())
}

fn c8(_: &Ctx) -> Outcome {
    let s = mp(&[&[1]]);
    let first = hall_polynomial(&s, &s, &mp(&[&[1, 1]]))?;
    let mut out = vec![check_with("n=1 (1),(1) into (1,1) is T+1", first == vec![1, 1], format!("{first:?}"))];
    let f = Gf::new(HELD_OUT)?;
    let cases = [
        (mp(&[&[1]]), mp(&[&[1]]), mp(&[&[1, 1]])),
        (mp(&[&[1]]), mp(&[&[1]]), mp(&[&[2]])),
        (mp(&[&[1]]), mp(&[&[1, 1]]), mp(&[&[1, 1, 1]])),
        (mp(&[&[1]]), mp(&[&[2]]), mp(&[&[2, 1]])),
        (mp(&[&[2]]), mp(&[&[1]]), mp(&[&[2, 1]])),
        (mp(&[&[1], &[]]), mp(&[&[1], &[]]), mp(&[&[1, 1], &[]])),
        (mp(&[&[1], &[]]), mp(&[&[], &[1]]), mp(&[&[], &[2]])),
        (mp(&[&[], &[1]]), mp(&[&[1], &[1]]), mp(&[&[1], &[2]])),
    ];
    for (l, n, m) in cases {
        let poly = hall_polynomial(&l, &n, &m)?;
        let fresh = hall_number(&f, &l, &n, &m)? as i64;
        let at = zpoly_eval(&poly, HELD_OUT as i64);
        out.push(check_with(
            format!("{l} {n} into {m} at q={HELD_OUT}"),
            at == fresh,
            format!("{poly:?} gives {at}, count {fresh}"),
        ));
    }
    Ok(out)
}

fn c9(_: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for m in 1..=5 {
        let r = lie_check(2, m)?;
        let want: Vec<i64> = (0..=m as i64).map(|k| m as i64 - 2 * k).collect();
        let (triple, spectrum) = match &r.sl2 {
            Some(s) => (s.he_ok && s.hf_ok, s.spectrum == want),
            None => (false, false),
        };
        out.push(check(format!("n=2 m={m} dimension {}", m + 1), r.dimension == m + 1));
        out.push(check(format!("n=2 m={m} sl_2 relations"), triple));
        out.push(check(format!("n=2 m={m} H spectrum"), spectrum));
        out.push(check(format!("n=2 m={m} irreducible"), r.irreducible));
    }
    for m in 1..=3 {
        let r = lie_check(3, m)?;
        let want = binomial(m + 2, 2);
        out.push(check(format!("n=3 m={m} dimension {want}"), r.dimension == want));
        out.push(check(format!("n=3 m={m} irreducible"), r.irreducible));
    }
    Ok(out)
}

fn gl_at_most(pd: &PdValue, bound: usize) -> bool {
    matches!(pd, PdValue::Finite(g) if *g <= bound)
}

fn c10(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for m in 2..=4 {
        let a = FinAlgebra::truncated_poly(2, m);
        let (cat, chain) = radical_layer_chain(&a, ctx.opts.budget)?;
        out.push(check(format!("m={m} rejective chain"), chain.verdict));
        match certify_heredity(&cat, &chain.levels, 4 * m + 4) {
            Ok(h) => {
                out.push(check(format!("m={m} heredity certificates"), h.verdict));
                out.push(check_with(
                    format!("m={m} gl.dim <= {m}"),
                    gl_at_most(&h.gl_dim, m),
                    format!("{:?}", h.gl_dim),
                ));
            }
            Err(QhaError::HeredityFailed(msg)) => {
                out.push(check_with(format!("m={m} heredity certificates"), false, msg))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn c11(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for (name, a) in
        [("F_2[x]/x^3", FinAlgebra::truncated_poly(2, 3)), ("UT_3(F_2)", FinAlgebra::upper_triangular(2, 3))]
    {
        let r = rep_dim_upper(&a, ctx.opts.budget)?;
        out.push(check(format!("{name} rejective chain"), r.chain_verdict));
        out.push(check(format!("{name} heredity certificates"), r.heredity.verdict));
        out.push(check_with(
            format!("{name} gl.dim <= 2m-2"),
            r.bound + 2 <= 2 * r.chain_length,
            format!("gl.dim {} with m = {}", r.bound, r.chain_length),
        ));
    }
    Ok(out)
}

fn c12(ctx: &Ctx) -> Outcome {
    let a = FinAlgebra::truncated_poly(2, 3);
    let aus = auslander_check(&a, None, ctx.opts.budget)?;
    let rd = rep_dim_upper(&a, ctx.opts.budget)?;
    Ok(vec![
        check_with(
            "Auslander algebra gl.dim = 2",
            matches!(aus.gl_dim, PdValue::Finite(2)),
            format!("{:?}", aus.gl_dim),
        ),
        check_with("Auslander algebra dom.dim >= 2", aus.dom_dim_at_least_2, format!("{:?}", aus.dom_dim)),
        check_with("rep_dim_upper returns a finite bound", true, format!("{}", rd.bound)),
        check("Auslander bound gives rep.dim <= 2", aus.rep_dim_at_most_2),
    ])
}

fn c13(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let o = ctx.order(OrderSpec::Congruence { n }, 2, Flavor::Mixed, 12)?;
        let ind = o.ind_lattices(None)?;
        let name = format!("congruence({n})");
        out.push(check_with(
            format!("{name} has {} classes", n + 2),
            ind.entries.len() == n as usize + 2,
            format!("{:?}", ind.labels()),
        ));
        // the subset table: lat Lambda_i inside lat Lambda_n
        let tail = ["R×0".to_string(), "0×R".to_string()];
        for i in 0..=n {
            let mut want: Vec<String> = (1..=i).rev().map(|k| format!("Λ_{k}")).collect();
            want.extend(tail.iter().cloned());
            let got = o.overring_restriction(&OrderSpec::Congruence { n: i }, None)?.labels();
            out.push(check_with(format!("{name} lat Λ_{i}"), got == want, format!("{got:?}")));
        }
        for side in &tail {
            let got = o.listed_overring_restriction(side, None)?.labels();
            out.push(check_with(format!("{name} lat {side}"), got == vec![side.clone()], format!("{got:?}")));
        }
        let mut pi = Vec::new();
        for e in &ind.entries {
            let f = o.proj_inj_flags(&e.lattice)?;
            if f.projective && f.injective == Some(true) {
                pi.push(e.label.clone());
            }
        }
        out.push(check_with(
            format!("{name} projective-injective is {{Λ_{n}}}"),
            pi == vec![format!("Λ_{n}")],
            format!("{pi:?}"),
        ));
        let rest: Vec<String> = ind.labels().into_iter().filter(|l| *l != format!("Λ_{n}")).collect();
        let below = o.overring_restriction(&OrderSpec::Congruence { n: n - 1 }, None)?.labels();
        out.push(check(format!("{name} minus Λ_{n} is lat Λ_{}", n - 1), rest == below));
    }
    Ok(out)
}

fn c14(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in 1..=2u32 {
        let o = ctx.order(OrderSpec::Congruence { n }, 2, Flavor::Mixed, 12)?;
        let rep = functional_equation_check(&o, 12)?;
        out.push(check_with(
            format!("congruence({n}) index p^{n}"),
            rep.index_exp == n as i64,
            format!("{}", rep.index_exp),
        ));
        out.push(check(format!("congruence({n}) Gorenstein"), rep.gorenstein));
        out.push(check(format!("congruence({n}) functional equation"), rep.verdict));
    }
    Ok(out)
}

fn c15(ctx: &Ctx) -> Outcome {
    let mut out = Vec::new();
    let runs: [(usize, fn(&Ctx, Option<Flavor>) -> Outcome); 4] = [(1, c1), (2, c2), (3, c3), (4, c4)];
    for (id, f) in runs {
        let mixed = f(ctx, Some(Flavor::Mixed))?;
        let equal = f(ctx, Some(Flavor::Equal))?;
        let all = |v: &[Check]| v.iter().all(|c| c.pass);
        out.push(check(format!("criterion {id} passes under mixed"), all(&mixed)));
        out.push(check(format!("criterion {id} passes under equal"), all(&equal)));
        out.push(check(format!("criterion {id} identical under both"), mixed == equal));
    }
    Ok(out)
}

fn run_one(ctx: &Ctx, id: usize) -> Outcome {
    match id {
        1 => c1(ctx, None),
        2 => c2(ctx, None),
        3 => c3(ctx, None),
        4 => c4(ctx, None),
        5 => c5(ctx),
        6 => c6(ctx),
        7 => c7(ctx),
        8 => c8(ctx),
        9 => c9(ctx),
        10 => c10(ctx),
        11 => c11(ctx),
        12 => c12(ctx),
        13 => c13(ctx),
        14 => c14(ctx),
        15 => c15(ctx),
        _ => Err(TaskError::input(format!("no criterion {id}"))),
    }
}

/// Runs one criterion.
pub fn run_criterion(opts: &VerifyOptions, id: usize) -> CriterionResult {
    let ctx = Ctx { opts };
    let (checks, error) = match run_one(&ctx, id) {
        Ok(c) => (c, None),
        Err(e) => (vec![], Some(e)),
    };
    CriterionResult {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        status: Status::of(&checks, error.as_ref()),
        checks,
        error,
    }
}

/// Runs the selected criteria in order, calling `each` as results arrive.
pub fn verify_all(opts: &VerifyOptions, mut each: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let ids: Vec<usize> = opts.only.clone().unwrap_or_else(|| (1..=15).collect());
    ids.into_iter()
        .map(|id| {
            let r = run_criterion(opts, id);
            each(&r);
            r
        })
        .collect()
}
