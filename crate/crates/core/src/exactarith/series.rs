use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ArithError;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qpow(p: u64, e: i64) -> Q {
    let b = Q::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b, (-e) as usize).recip()
    }
}

/// Power series in T truncated after T^D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub c: Vec<Q>,
}

impl TruncSeries {
    pub fn zero(d: usize) -> Self {
        TruncSeries { c: vec![Q::zero(); d + 1] }
    }
    pub fn one(d: usize) -> Self {
        let mut s = Self::zero(d);
        s.c[0] = Q::one();
        s
    }
    pub fn monomial(d: usize, k: usize, coef: Q) -> Self {
        let mut s = Self::zero(d);
        if k <= d {
            s.c[k] = coef;
        }
        s
    }
    pub fn from_ints(v: &[i64]) -> Self {
        TruncSeries { c: v.iter().map(|&x| q(x)).collect() }
    }
    pub fn from_counts(v: &[u64]) -> Self {
        TruncSeries { c: v.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect() }
    }
    /// Truncation degree D.
    pub fn deg(&self) -> usize {
        self.c.len() - 1
    }
    pub fn truncate(&self, d: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(d + 1, Q::zero());
        TruncSeries { c }
    }
    pub fn add(&self, o: &Self) -> Self {
        let d = self.deg().min(o.deg());
        TruncSeries { c: (0..=d).map(|i| &self.c[i] + &o.c[i]).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        let d = self.deg().min(o.deg());
        TruncSeries { c: (0..=d).map(|i| &self.c[i] - &o.c[i]).collect() }
    }
    pub fn neg(&self) -> Self {
        TruncSeries { c: self.c.iter().map(|x| -x).collect() }
    }
    pub fn scale(&self, s: &Q) -> Self {
        TruncSeries { c: self.c.iter().map(|x| x * s).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let d = self.deg().min(o.deg());
        let mut c = vec![Q::zero(); d + 1];
        for i in 0..=d {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=d - i {
                if !o.c[j].is_zero() {
                    c[i + j] += &self.c[i] * &o.c[j];
                }
            }
        }
        TruncSeries { c }
    }
    /// Multiply by T^k.
    pub fn shift(&self, k: usize) -> Self {
        let d = self.deg();
        let mut c = vec![Q::zero(); d + 1];
        for i in 0..=d {
            if i + k <= d {
                c[i + k] = self.c[i].clone();
            }
        }
        TruncSeries { c }
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.c[0].is_zero() {
            return Err(ArithError::NotInvertible("series with zero constant term".into()));
        }
        let d = self.deg();
        let inv0 = self.c[0].recip();
        let mut out = vec![Q::zero(); d + 1];
        out[0] = inv0.clone();
        for k in 1..=d {
            let mut acc = Q::zero();
            for i in 1..=k {
                if !self.c[i].is_zero() {
                    acc += &self.c[i] * &out[k - i];
                }
            }
            out[k] = -acc * &inv0;
        }
        Ok(TruncSeries { c: out })
    }
    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }
}

/// Substitute p^{-s} -> p^{-(s - a)}: coefficient k gets multiplied by p^{a k + b}.
///
/// Fails if some nonzero coefficient would need a non-integral power of p.
pub fn series_scale_pow(s: &TruncSeries, p: u64, a: &Q, b: &Q) -> Result<TruncSeries, ArithError> {
    let mut c = Vec::with_capacity(s.c.len());
    for (k, x) in s.c.iter().enumerate() {
        if x.is_zero() {
            c.push(Q::zero());
            continue;
        }
        let e = a * q(k as i64) + b;
        if !e.is_integer() {
            return Err(ArithError::ShiftNonIntegral(format!("exponent {e} at degree {k}")));
        }
        let e = e.to_integer().to_i64().ok_or_else(|| ArithError::ShiftNonIntegral("overflow".into()))?;
        c.push(x * qpow(p, e));
    }
    Ok(TruncSeries { c })
}

/// The substitution s -> s - a in a series in T = p^{-s}.
pub fn series_shift_scale(s: &TruncSeries, p: u64, a: &Q) -> Result<TruncSeries, ArithError> {
    series_scale_pow(s, p, a, &Q::zero())
}

// Dense polynomials over Q, lowest degree first, no trailing zeros.

pub fn poly_trim(mut a: Vec<Q>) -> Vec<Q> {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

pub fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    poly_trim(
        (0..n).map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero)).collect(),
    )
}

pub fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let nb: Vec<Q> = b.iter().map(|x| -x).collect();
    poly_add(a, &nb)
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    poly_trim(c)
}

pub fn poly_scale(a: &[Q], s: &Q) -> Vec<Q> {
    poly_trim(a.iter().map(|x| x * s).collect())
}

pub fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut qv = vec![Q::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let sh = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[i + sh] -= &f * y;
        }
        qv[sh] = f;
        r = poly_trim(r);
    }
    (poly_trim(qv), r)
}

pub fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        return x;
    }
    let lead = x.last().unwrap().clone();
    poly_scale(&x, &lead.recip())
}

pub fn poly_eval(a: &[Q], t: &Q) -> Q {
    let mut acc = Q::zero();
    for c in a.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

pub fn poly_pow(a: &[Q], e: usize) -> Vec<Q> {
    let mut r = vec![Q::one()];
    for _ in 0..e {
        r = poly_mul(&r, a);
    }
    r
}

/// Polynomial to series truncated at degree d.
pub fn poly_series(a: &[Q], d: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(d);
    for (i, x) in a.iter().enumerate() {
        if i <= d {
            s.c[i] = x.clone();
        }
    }
    s
}

/// Rational function num/den in T with den(0) = 1 and gcd(num, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncT {
    pub num: Vec<Q>,
    pub den: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatFuncJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RatFuncT {
    pub fn new(num: Vec<Q>, den: Vec<Q>) -> Result<Self, ArithError> {
        let num = poly_trim(num);
        let den = poly_trim(den);
        if den.is_empty() {
            return Err(ArithError::NotInvertible("zero denominator".into()));
        }
        if num.is_empty() {
            return Ok(RatFuncT { num, den: vec![Q::one()] });
        }
        let g = poly_gcd(&num, &den);
        let (mut n, _) = poly_divrem(&num, &g);
        let (mut d, _) = poly_divrem(&den, &g);
        if d[0].is_zero() {
            return Err(ArithError::NotInvertible("denominator vanishes at T = 0".into()));
        }
        let c = d[0].recip();
        n = poly_scale(&n, &c);
        d = poly_scale(&d, &c);
        Ok(RatFuncT { num: n, den: d })
    }
    pub fn poly(num: Vec<Q>) -> Self {
        RatFuncT { num: poly_trim(num), den: vec![Q::one()] }
    }
    pub fn expand(&self, d: usize) -> TruncSeries {
        let n = poly_series(&self.num, d);
        let den = poly_series(&self.den, d);
        n.mul(&den.inverse().expect("den(0) = 1"))
    }
    pub fn mul(&self, o: &Self) -> Self {
        RatFuncT::new(poly_mul(&self.num, &o.num), poly_mul(&self.den, &o.den)).unwrap()
    }
    pub fn add(&self, o: &Self) -> Self {
        RatFuncT::new(poly_add(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den)), poly_mul(&self.den, &o.den))
            .unwrap()
    }
    pub fn is_integral(&self) -> bool {
        self.num.iter().chain(&self.den).all(|x| x.is_integer())
    }
    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson {
            num: self.num.iter().map(|x| x.to_string()).collect(),
            den: self.den.iter().map(|x| x.to_string()).collect(),
        }
    }
    pub fn den_degree(&self) -> usize {
        self.den.len().saturating_sub(1)
    }
    pub fn num_degree(&self) -> usize {
        self.num.len().saturating_sub(1)
    }
}

/// Solve a linear system over Q by elimination; returns one solution or None.
fn solve_q(mut rows: Vec<Vec<Q>>, nvars: usize) -> Option<Vec<Q>> {
    // rows: coefficients followed by rhs
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    for row in rows.iter().skip(r) {
        if !row[nvars].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); nvars];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = rows[i][nvars].clone();
    }
    Some(x)
}

/// Reconstruct num/den from a truncated series, with deg num <= max_num and
/// deg den <= max_den. Needs D >= max_num + 2 max_den + 2 so that the last
/// two coefficients act as a stability margin.
pub fn fit_rational(s: &TruncSeries, max_num: usize, max_den: usize) -> Result<RatFuncT, ArithError> {
    let d = s.deg();
    if d < max_num + 2 * max_den + 2 {
        return Err(ArithError::InterpolationUnstable(format!(
            "need at least {} coefficients, have {}",
            max_num + 2 * max_den + 3,
            d + 1
        )));
    }
    let fit_top = d - 2;
    for e in 0..=max_den {
        // (den * s)_k = 0 for max_num < k <= fit_top, den_0 = 1
        let mut rows = Vec::new();
        for k in max_num + 1..=fit_top {
            let mut row: Vec<Q> = (1..=e).map(|i| if i <= k { s.c[k - i].clone() } else { Q::zero() }).collect();
            row.push(-s.c[k].clone());
            rows.push(row);
        }
        let Some(sol) = solve_q(rows, e) else {
            continue;
        };
        let mut den = vec![Q::one()];
        den.extend(sol);
        let ds = poly_series(&den, d);
        let prod = ds.mul(s);
        if (max_num + 1..=d).any(|k| !prod.c[k].is_zero()) {
            continue;
        }
        let num: Vec<Q> = prod.c[..=max_num.min(d)].to_vec();
        let f = RatFuncT::new(num, den)?;
        if f.expand(d) == *s {
            return Ok(f);
        }
    }
    Err(ArithError::InterpolationUnstable(format!("no fit with deg num <= {max_num}, deg den <= {max_den}")))
}

/// Determinant of a square matrix of series with invertible diagonal pivots.
pub fn series_det(m: &[Vec<TruncSeries>]) -> Result<TruncSeries, ArithError> {
    let n = m.len();
    if n == 0 {
        return Err(ArithError::NotInvertible("empty matrix".into()));
    }
    let d = m[0][0].deg();
    let mut a: Vec<Vec<TruncSeries>> = m.to_vec();
    let mut det = TruncSeries::one(d);
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| !a[i][k].c[0].is_zero()) else {
            return Err(ArithError::NotInvertible("no pivot with unit constant term".into()));
        };
        if pr != k {
            a.swap(pr, k);
            det = det.neg();
        }
        let inv = a[k][k].inverse()?;
        det = det.mul(&a[k][k]);
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].mul(&inv);
            for j in k..n {
                let t = f.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    Ok(det)
}

/// Product of two series matrices.
pub fn series_matmul(a: &[Vec<TruncSeries>], b: &[Vec<TruncSeries>]) -> Vec<Vec<TruncSeries>> {
    let n = a.len();
    let k = b.len();
    let c = b.first().map_or(0, |r| r.len());
    let d = a[0][0].deg();
    let mut out = vec![vec![TruncSeries::zero(d); c]; n];
    for i in 0..n {
        for j in 0..c {
            let mut acc = TruncSeries::zero(d);
            for t in 0..k {
                if a[i][t].is_zero() || b[t][j].is_zero() {
                    continue;
                }
                acc = acc.add(&a[i][t].mul(&b[t][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Inverse of a series matrix via Gauss-Jordan with unit-constant pivots.
pub fn series_mat_inverse(m: &[Vec<TruncSeries>]) -> Result<Vec<Vec<TruncSeries>>, ArithError> {
    let n = m.len();
    let d = m[0][0].deg();
    let mut a: Vec<Vec<TruncSeries>> = m.to_vec();
    let mut inv: Vec<Vec<TruncSeries>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { TruncSeries::one(d) } else { TruncSeries::zero(d) }).collect())
        .collect();
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| !a[i][k].c[0].is_zero()) else {
            return Err(ArithError::NotInvertible("singular series matrix".into()));
        };
        a.swap(pr, k);
        inv.swap(pr, k);
        let pinv = a[k][k].inverse()?;
        for j in 0..n {
            a[k][j] = a[k][j].mul(&pinv);
            inv[k][j] = inv[k][j].mul(&pinv);
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = f.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&t);
                let t = f.mul(&inv[k][j]);
                inv[i][j] = inv[i][j].sub(&t);
            }
        }
    }
    Ok(inv)
}

pub fn is_nonneg_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}
