//! Partial zeta functions, zeta matrices and the identities they satisfy.

mod block;

pub use block::*;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactarith::*;
use crate::orders::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("order is not Gorenstein: {0}")]
    NotGorenstein(String),
    #[error("empty chain step: {0}")]
    EmptyChainStep(String),
    #[error("shift needs a non-integral power of p: {0}")]
    ShiftNonIntegral(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn arith(e: ArithError) -> ZetaError {
    match e {
        ArithError::ShiftNonIntegral(s) => ZetaError::ShiftNonIntegral(s),
        e => ZetaError::Arith(e),
    }
}

/// Z(L, M; s) for all L, M in a set of classes of one catalog.
#[derive(Clone, Debug)]
pub struct ZetaMatrix {
    pub v: AModule,
    pub d: usize,
    /// Catalog positions of the rows (= columns).
    pub classes: Vec<usize>,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<TruncSeries>>,
}

#[derive(Serialize)]
pub struct ZetaMatrixJson {
    pub labels: Vec<String>,
    pub truncation: usize,
    pub entries: Vec<Vec<Vec<String>>>,
}

impl ZetaMatrix {
    pub fn size(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> ZetaMatrixJson {
        ZetaMatrixJson {
            labels: self.labels.clone(),
            truncation: self.d,
            entries: self.entries.iter().map(|r| r.iter().map(|s| s.to_strings()).collect()).collect(),
        }
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// counts[c][k] = #{N <= L of colength k with N in class c}.
pub fn class_counts(order: &Order, cat: &IsoCatalog, l: &Lattice, d: usize) -> Result<Vec<Vec<u64>>, ZetaError> {
    let mut counts = vec![vec![0u64; d + 1]; cat.len()];
    order.for_each_level(l, d, &mut |k, level| {
        let cls: Vec<usize> = level.par_iter().map(|n| order.classify(cat, n)).collect::<Result<_, _>>()?;
        for c in cls {
            counts[c][k] += 1;
        }
        Ok(())
    })?;
    Ok(counts)
}

pub fn partial_zeta(order: &Order, v: &AModule, l: usize, m: usize, d: usize) -> Result<TruncSeries, ZetaError> {
    let cat = order.iso_catalog(v)?;
    let counts = class_counts(order, &cat, &cat.classes[l].lattice, d)?;
    Ok(TruncSeries::from_counts(&counts[m]))
}

pub fn zeta_matrix(order: &Order, v: &AModule, d: usize) -> Result<ZetaMatrix, ZetaError> {
    let size = class_number(order, v)?;
    zeta_matrix_sub(order, v, d, &(0..size).collect::<Vec<_>>())
}

/// Zeta matrix restricted to the given catalog classes (a subcategory).
pub fn zeta_matrix_sub(order: &Order, v: &AModule, d: usize, classes: &[usize]) -> Result<ZetaMatrix, ZetaError> {
    if v.is_zero() {
        return Ok(ZetaMatrix {
            v: v.clone(),
            d,
            classes: vec![0],
            labels: vec!["0".into()],
            entries: vec![vec![TruncSeries::one(d)]],
        });
    }
    let cat = order.iso_catalog(v)?;
    let mut entries = Vec::with_capacity(classes.len());
    for &r in classes {
        let counts = class_counts(order, &cat, &cat.classes[r].lattice, d)?;
        entries.push(classes.iter().map(|&c| TruncSeries::from_counts(&counts[c])).collect());
    }
    Ok(ZetaMatrix {
        v: v.clone(),
        d,
        classes: classes.to_vec(),
        labels: classes.iter().map(|&c| cat.classes[c].label.clone()).collect(),
        entries,
    })
}

/// Rational reconstruction of smallest total degree deg num + deg den
/// that the truncation can still confirm.
pub fn fit_auto(s: &TruncSeries) -> Result<RatFuncT, ArithError> {
    let d = s.deg();
    for total in 0..=d {
        for b in 0..=total {
            let a = total - b;
            if d < a + 2 * b + 2 {
                continue;
            }
            if let Ok(f) = fit_rational(s, a, b) {
                return Ok(f);
            }
        }
    }
    Err(ArithError::InterpolationUnstable(format!(
        "no rational function is confirmed by {} coefficients; raise the truncation",
        d + 1
    )))
}

pub fn det_series(zm: &ZetaMatrix) -> Result<TruncSeries, ZetaError> {
    series_det(&zm.entries).map_err(arith)
}

/// Determinant as a rational function; `bounds` are (deg num, deg den)
/// limits, or None to search.
pub fn det_zeta(zm: &ZetaMatrix, bounds: Option<(usize, usize)>) -> Result<RatFuncT, ZetaError> {
    let s = det_series(zm)?;
    match bounds {
        Some((a, b)) => fit_rational(&s, a, b).map_err(arith),
        None => fit_auto(&s).map_err(arith),
    }
}

/// One factor (1 - p^a T^b)^(-e) of the product formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub simple: usize,
    pub n: usize,
    pub p_exp: u32,
    pub t_exp: u32,
    pub exponent: usize,
}

#[derive(Serialize)]
pub struct DetReport {
    pub v: Vec<usize>,
    pub truncation: usize,
    pub det_series: Vec<String>,
    pub direct: Option<RatFuncJson>,
    pub factors: Vec<Factor>,
    pub formula: RatFuncJson,
    pub series_agree: bool,
    pub rational_agree: bool,
    pub verdict: bool,
}

/// #classes in an A-module; the zero module has the single class 0.
pub fn class_number(order: &Order, v: &AModule) -> Result<usize, ZetaError> {
    if v.is_zero() {
        return Ok(1);
    }
    Ok(order.iso_catalog(v)?.len())
}

/// The product over j and 0 <= n < l_j(V) of
/// (1 - q_j^n T^{d_j l_j(A)})^{-#classes(S_j^n + V_j)}.
pub fn solomon_factors(order: &Order, v: &AModule) -> Result<Vec<Factor>, ZetaError> {
    let mut out = Vec::new();
    for (j, s) in order.pres.simples.iter().enumerate() {
        let vj = v.without(j);
        for n in 0..v.0[j] {
            let w = vj.add(&AModule::simple_power(v.0.len(), j, n));
            out.push(Factor {
                simple: j,
                n,
                p_exp: s.res_deg * n as u32,
                t_exp: s.res_deg * s.l_a as u32,
                exponent: class_number(order, &w)?,
            });
        }
    }
    Ok(out)
}

pub fn factors_rational(p: u64, factors: &[Factor]) -> RatFuncT {
    let mut den = vec![Q::one()];
    for f in factors {
        let mut g = vec![Q::zero(); f.t_exp as usize + 1];
        g[0] = Q::one();
        g[f.t_exp as usize] = -qpow(p, f.p_exp as i64);
        den = poly_mul(&den, &poly_pow(&g, f.exponent));
    }
    RatFuncT::new(vec![Q::one()], den).expect("denominator is 1 at T = 0")
}

pub fn verify_solomon2(order: &Order, v: &AModule, d: usize) -> Result<DetReport, ZetaError> {
    let zm = zeta_matrix(order, v, d)?;
    let det = det_series(&zm)?;
    let factors = solomon_factors(order, v)?;
    let formula = factors_rational(order.p(), &factors);
    let series_agree = formula.expand(d) == det;
    let dd = formula.den_degree();
    let direct = if d >= 2 * dd + 2 { fit_rational(&det, 0, dd).ok() } else { None };
    let rational_agree = direct.as_ref() == Some(&formula);
    Ok(DetReport {
        v: v.0.clone(),
        truncation: d,
        det_series: det.to_strings(),
        direct: direct.map(|f| f.to_json()),
        factors,
        formula: formula.to_json(),
        series_agree,
        rational_agree,
        verdict: series_agree && rational_agree,
    })
}

fn rf_sub(a: &RatFuncT, b: &RatFuncT) -> RatFuncT {
    a.add(&RatFuncT { num: poly_scale(&b.num, &-Q::one()), den: b.den.clone() })
}

fn rf_inv(a: &RatFuncT) -> Result<RatFuncT, ArithError> {
    RatFuncT::new(a.den.clone(), a.num.clone())
}

/// Inverse of a matrix of rational functions equal to 1 at T = 0 on the
/// diagonal and 0 off it, by elimination with diagonal pivots.
pub fn ratmat_inverse(m: &[Vec<RatFuncT>]) -> Result<Vec<Vec<RatFuncT>>, ArithError> {
    let n = m.len();
    let one = RatFuncT::poly(vec![Q::one()]);
    let zero = RatFuncT::poly(vec![]);
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<RatFuncT>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    for k in 0..n {
        let piv = rf_inv(&a[k][k])?;
        for j in 0..n {
            a[k][j] = a[k][j].mul(&piv);
            inv[k][j] = inv[k][j].mul(&piv);
        }
        for i in 0..n {
            if i == k || a[i][k].num.is_empty() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                a[i][j] = rf_sub(&a[i][j], &f.mul(&a[k][j]));
                inv[i][j] = rf_sub(&inv[i][j], &f.mul(&inv[k][j]));
            }
        }
    }
    Ok(inv)
}

#[derive(Serialize)]
pub struct InverseReport {
    /// Fitted entries of Z, where the truncation suffices to confirm a fit.
    pub entries: Vec<Vec<Option<RatFuncJson>>>,
    pub inverse: Vec<Vec<RatFuncJson>>,
    /// Every inverse entry lies in Z[T].
    pub polynomial: bool,
}

/// Inverts Z over Q[[T]] and reconstructs each entry of the inverse. The
/// inverse has far lower degree than the entries of Z, so this needs fewer
/// coefficients than fitting Z first.
pub fn verify_inverse_polynomial(zm: &ZetaMatrix) -> Result<InverseReport, ZetaError> {
    let series_inv = series_mat_inverse(&zm.entries).map_err(arith)?;
    let inv: Vec<Vec<RatFuncT>> = series_inv
        .iter()
        .map(|r| r.iter().map(fit_auto).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(arith)?;
    let polynomial = inv.iter().flatten().all(|f| f.den.len() == 1 && f.is_integral());
    Ok(InverseReport {
        entries: zm.entries.iter().map(|r| r.iter().map(|e| fit_auto(e).ok().map(|f| f.to_json())).collect()).collect(),
        inverse: inv.iter().map(|r| r.iter().map(|f| f.to_json()).collect()).collect(),
        polynomial,
    })
}

/// zeta_Lambda(s) = sum over full left ideals of (Lambda : L)^{-s}.
pub fn whole_zeta(order: &Order, d: usize) -> Result<TruncSeries, ZetaError> {
    let l = order.regular_lattice()?;
    let mut c = vec![0u64; d + 1];
    order.for_each_level(&l, d, &mut |k, level| {
        c[k] = level.len() as u64;
        Ok(())
    })?;
    Ok(TruncSeries::from_counts(&c))
}

/// f(1/(pT)) * T^deg f, as a polynomial in T.
fn reflect(f: &[Q], p: u64) -> Vec<Q> {
    let dg = f.len().saturating_sub(1);
    let mut out = vec![Q::zero(); dg + 1];
    for (i, c) in f.iter().enumerate() {
        out[dg - i] = c * qpow(p, -(i as i64));
    }
    out
}

#[derive(Serialize)]
pub struct FunctionalEquationReport {
    pub zeta: RatFuncJson,
    pub zeta_max: RatFuncJson,
    pub index_exp: i64,
    pub gorenstein: bool,
    pub verdict: bool,
}

/// A maximal overorder among the listed overrings: the unital one of
/// largest index over Lambda.
pub fn maximal_overorder(order: &Order) -> Result<(OrderSpec, i64), ZetaError> {
    let reg = order.regular_lattice()?;
    let over = order.over_invariant(&reg);
    let names = order.overring_names_unital();
    let Some((i, &c)) = over.iter().enumerate().max_by_key(|(i, &c)| (c, std::cmp::Reverse(*i))) else {
        return Ok((order.spec.clone(), 0));
    };
    let spec = order
        .overring_spec(&names[i])
        .ok_or_else(|| ZetaError::Unsupported(format!("overring {} has no order description", names[i])))?;
    Ok((spec, c))
}

pub fn is_gorenstein(order: &Order) -> Result<bool, ZetaError> {
    let v = order.regular_module();
    let cat = order.iso_catalog(&v)?;
    let reg = order.regular_lattice()?;
    let k = order.classify(&cat, &reg)?;
    for part in &cat.classes[k].parts {
        let sub = order.iso_catalog(&part.v)?;
        let f = order.proj_inj_flags(&sub.classes[part.idx].lattice)?;
        if f.injective != Some(true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// zeta_L(T) zeta_G(1/(pT)) = p^c T^{2c} zeta_G(T) zeta_L(1/(pT)), with
/// (Gamma : Lambda) = p^c, checked on the reconstructed rational functions.
pub fn functional_equation_check(order: &Order, d: usize) -> Result<FunctionalEquationReport, ZetaError> {
    let gorenstein = is_gorenstein(order)?;
    if !gorenstein {
        return Err(ZetaError::NotGorenstein(order.spec.name()));
    }
    let (gspec, c) = maximal_overorder(order)?;
    let gamma = Order::new(&gspec, order.ring.clone(), order.budget)?;
    let zl = fit_auto(&whole_zeta(order, d)?).map_err(arith)?;
    let zg = fit_auto(&whole_zeta(&gamma, d)?).map_err(arith)?;
    let p = order.p();
    // both sides times T^(deg) to clear the reflected denominators
    let (nl, dl) = (reflect(&zl.num, p), reflect(&zl.den, p));
    let (ng, dg) = (reflect(&zg.num, p), reflect(&zg.den, p));
    let ex = |f: &[Q]| f.len() as i64 - 1;
    // zl.num/zl.den * ng/dg * T^(ex(dg)-ex(ng))
    let lhs_num = poly_mul(&zl.num, &ng);
    let lhs_den = poly_mul(&zl.den, &dg);
    let lhs_t = ex(&zg.den) - ex(&zg.num);
    // p^c T^2c * zg.num/zg.den * nl/dl * T^(ex(zl.den)-ex(zl.num))
    let rhs_num = poly_scale(&poly_mul(&zg.num, &nl), &qpow(p, c));
    let rhs_den = poly_mul(&zg.den, &dl);
    let rhs_t = 2 * c + ex(&zl.den) - ex(&zl.num);
    let shift = lhs_t.min(rhs_t);
    let tpow = |k: i64| {
        let mut v = vec![Q::zero(); k as usize + 1];
        v[k as usize] = Q::one();
        v
    };
    let a = poly_mul(&poly_mul(&lhs_num, &rhs_den), &tpow(lhs_t - shift));
    let b = poly_mul(&poly_mul(&rhs_num, &lhs_den), &tpow(rhs_t - shift));
    let verdict = poly_trim(a) == poly_trim(b);
    Ok(FunctionalEquationReport { zeta: zl.to_json(), zeta_max: zg.to_json(), index_exp: c, gorenstein, verdict })
}
