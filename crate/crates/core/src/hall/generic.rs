use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactarith::{q, Q};

use super::field::*;
use super::quiver::*;
use super::HallError;

/// Compositions of m into n parts, largest first in lexicographic order. A
/// composition nu names the lattice sum of P_a^{nu_a}.
pub fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n - 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=rem).rev() {
            cur.push(x);
            rec(i + 1, n, rem - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, m, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |a, i| a * (n - i) / (i + 1))
}

/// For the lattice L of type mu: the number of N in L with L/N of type
/// lambda, grouped by the type nu of N. Works in L / J^{c+1} L with c the
/// length of lambda, where N is determined by its image W in L / J^c L.
pub fn psi_counts(f: &Gf, lambda: &MultiPartition, mu: &[usize]) -> Result<BTreeMap<Vec<usize>, i64>, HallError> {
    let n = mu.len();
    if lambda.n() != n {
        return Err(HallError::Invalid("lambda and mu live on different quivers".into()));
    }
    let c = lambda.size();
    if c == 0 {
        return Ok(BTreeMap::from([(mu.to_vec(), 1)]));
    }
    let segs: Vec<(usize, usize)> = mu.iter().enumerate().flat_map(|(a, &k)| std::iter::repeat_n((a, c), k)).collect();
    let long: Vec<(usize, usize)> = segs.iter().map(|&(a, j)| (a, j + 1)).collect();
    let ybar = Rep::from_segments(n, &segs);
    let y = Rep::from_segments(n, &long);
    let (_, pbar) = segment_positions(n, &segs);
    let (_, plong) = segment_positions(n, &long);
    // index of b_{s,k} in Ybar -> index in Y at the same vertex
    let mut lift: Vec<Vec<usize>> = ybar.dims.iter().map(|&d| vec![0; d]).collect();
    let mut bottom: Vec<Vec<usize>> = vec![vec![]; n];
    for (s, v) in pbar.iter().enumerate() {
        for (k, &(x, i)) in v.iter().enumerate() {
            lift[x][i] = plong[s][k].1;
        }
        let (x, i) = plong[s][c];
        bottom[x].push(i);
    }
    let dl = lambda.dim_vector();
    let dimw: Vec<usize> = ybar.dims.iter().zip(&dl).map(|(d, l)| d.saturating_sub(*l)).collect();
    if ybar.dims.iter().zip(&dl).any(|(d, l)| l > d) {
        return Ok(BTreeMap::new());
    }
    let mut out = BTreeMap::new();
    let mut err = None;
    for_each_subrep(f, &ybar, &dimw, &mut |w| {
        if err.is_some() {
            return;
        }
        match rep_iso_type(f, &quotient_rep(f, &ybar, w)) {
            Ok(t) if t == *lambda => {}
            Ok(_) => return,
            Err(e) => {
                err = Some(e);
                return;
            }
        }
        // W' = lift of W plus the bottom layer, as row bases at each vertex
        let wp: Vec<GMat> = (0..n)
            .map(|x| {
                let mut rows: GMat = w[x]
                    .0
                    .iter()
                    .map(|r| {
                        let mut v = vec![0u16; y.dims[x]];
                        for (i, &e) in r.iter().enumerate() {
                            v[lift[x][i]] = e;
                        }
                        v
                    })
                    .collect();
                for &i in &bottom[x] {
                    let mut v = vec![0u16; y.dims[x]];
                    v[i] = 1;
                    rows.push(v);
                }
                rows
            })
            .collect();
        let nu: Vec<usize> = (0..n)
            .map(|a| {
                let from = (a + 1) % n;
                let img = gmat_mul(f, &wp[from], &y.maps[from]);
                wp[a].len() - if img.is_empty() || y.dims[a] == 0 { 0 } else { grank(f, &img) }
            })
            .collect();
        *out.entry(nu).or_insert(0i64) += 1;
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Matrix of u_lambda on the span of the u_nu, |nu| = m: column nu holds
/// the coefficients of u_lambda u_nu.
#[derive(Clone, Debug, Serialize)]
pub struct GenericAction {
    pub n: usize,
    pub m: usize,
    pub lambda: String,
    pub basis: Vec<Vec<usize>>,
    pub entries: Vec<Vec<ZPoly>>,
}

pub fn generic_action(n: usize, m: usize, lambda: &MultiPartition) -> Result<GenericAction, HallError> {
    let basis = compositions(n, m);
    let pos: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let fits = stable_fit_many(|f| {
        let mut vals = BTreeMap::new();
        for (i, mu) in basis.iter().enumerate() {
            for (nu, c) in psi_counts(f, lambda, mu)? {
                vals.insert((i, pos[&nu]), c);
            }
        }
        Ok(vals)
    })?;
    let mut entries = vec![vec![ZPoly::new(); basis.len()]; basis.len()];
    for ((i, j), p) in fits {
        entries[i][j] = p;
    }
    Ok(GenericAction { n, m, lambda: lambda.to_string(), basis, entries })
}

// ----- checks at T = 1 -----

type QMat = Vec<Vec<Q>>;

fn qident(d: usize) -> QMat {
    (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

fn qmul(a: &QMat, b: &QMat) -> QMat {
    let d = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..d)
                .map(|j| r.iter().zip(b).fold(Q::zero(), |s, (x, row)| if x.is_zero() { s } else { s + x * &row[j] }))
                .collect()
        })
        .collect()
}

fn qlin(a: &QMat, s: &Q, b: &QMat, t: &Q) -> QMat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * s + v * t).collect()).collect()
}

fn bracket(a: &QMat, b: &QMat) -> QMat {
    qlin(&qmul(a, b), &Q::one(), &qmul(b, a), &-Q::one())
}

fn specialize(a: &GenericAction, t: &Q) -> QMat {
    a.entries.iter().map(|r| r.iter().map(|p| zpoly_eval_q(p, t)).collect()).collect()
}

/// Dimension of the unital algebra generated by `gens`.
pub fn algebra_dimension(gens: &[QMat], d: usize) -> usize {
    let mut basis: Vec<(Vec<Q>, usize)> = Vec::new();
    let insert = |m: &QMat, basis: &mut Vec<(Vec<Q>, usize)>| -> bool {
        let mut v: Vec<Q> = m.iter().flatten().cloned().collect();
        for (b, p) in basis.iter() {
            if !v[*p].is_zero() {
                let t = v[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &t * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = v[p].clone();
        for x in v.iter_mut() {
            *x /= &s;
        }
        for (b, _) in basis.iter_mut() {
            if !b[p].is_zero() {
                let t = b[p].clone();
                for (x, y) in b.iter_mut().zip(&v) {
                    *x -= &t * y;
                }
            }
        }
        basis.push((v, p));
        true
    };
    let mut queue = vec![qident(d)];
    insert(&queue[0], &mut basis);
    while let Some(m) = queue.pop() {
        for g in gens {
            let x = qmul(g, &m);
            if basis.len() < d * d && insert(&x, &mut basis) {
                queue.push(x);
            }
        }
    }
    basis.len()
}

/// Characteristic polynomial det(x - A), lowest degree first.
pub fn char_poly(a: &QMat) -> Vec<Q> {
    let d = a.len();
    let mut c = vec![Q::zero(); d + 1];
    c[d] = Q::one();
    let mut mk = vec![vec![Q::zero(); d]; d];
    for k in 1..=d {
        let am = qmul(a, &mk);
        mk = qlin(&am, &Q::one(), &qident(d), &c[d - k + 1]);
        let tr = qmul(a, &mk).iter().enumerate().fold(Q::zero(), |s, (i, r)| s + &r[i]);
        c[d - k] = -tr / q(k as i64);
    }
    c
}

/// Integer roots with multiplicity, if the polynomial splits over Z.
fn integer_roots(p: &[Q], bound: i64) -> Option<Vec<i64>> {
    let mut p = p.to_vec();
    let mut roots = Vec::new();
    for r in (-bound..=bound).rev() {
        loop {
            if p.len() <= 1 {
                break;
            }
            // synthetic division by (x - r)
            let rq = q(r);
            let mut quo = vec![Q::zero(); p.len() - 1];
            let mut acc = Q::zero();
            for i in (0..p.len()).rev() {
                acc = acc * &rq + &p[i];
                if i > 0 {
                    quo[i - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                break;
            }
            roots.push(r);
            p = quo;
        }
    }
    (p.len() == 1).then_some(roots)
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Check {
    pub pairing: String,
    pub he_ok: bool,
    pub hf_ok: bool,
    /// Eigenvalues of H with multiplicity, largest first.
    pub spectrum: Vec<i64>,
    pub spectrum_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LieReport {
    pub n: usize,
    pub m: usize,
    pub dimension: usize,
    pub expected_dimension: usize,
    pub algebra_dimension: usize,
    pub irreducible: bool,
    pub sl2: Option<Sl2Check>,
    pub nonadjacent_commute: Option<bool>,
    pub verdict: bool,
}

fn sl2_check(e: &QMat, f: &QMat, m: usize, pairing: &str) -> Sl2Check {
    let h = bracket(e, f);
    let two = q(2);
    let he_ok = bracket(&h, e) == qlin(e, &two, e, &Q::zero());
    let hf_ok = bracket(&h, f) == qlin(f, &-two, f, &Q::zero());
    let cp = char_poly(&h);
    let bound = h
        .iter()
        .map(|r| r.iter().fold(Q::zero(), |s, x| s + x.abs()))
        .max()
        .unwrap_or_else(Q::zero)
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap_or(0);
    let spectrum = integer_roots(&cp, bound).unwrap_or_default();
    let want: Vec<i64> = (0..=m as i64).map(|k| m as i64 - 2 * k).collect();
    Sl2Check { pairing: pairing.into(), he_ok, hf_ok, spectrum_ok: spectrum == want, spectrum }
}

/// The generic Hall module on lattices of rank m, specialized at T = 1:
/// dimension, irreducibility, the sl_2 relations for n = 2 and commuting
/// non-adjacent generators for n >= 4.
pub fn lie_check(n: usize, m: usize) -> Result<LieReport, HallError> {
    if n == 0 {
        return Err(HallError::Invalid("the quiver needs a vertex".into()));
    }
    let gens: Vec<QMat> = (0..n)
        .map(|a| generic_action(n, m, &MultiPartition::simple(n, a)).map(|g| specialize(&g, &Q::one())))
        .collect::<Result<_, _>>()?;
    let d = compositions(n, m).len();
    let expected = binomial(m + n - 1, n - 1);
    let alg = algebra_dimension(&gens, d);
    let irreducible = alg == d * d;
    let sl2 = (n == 2).then(|| {
        let a = sl2_check(&gens[0], &gens[1], m, "E = u_S1, F = u_S2");
        if a.he_ok && a.hf_ok && a.spectrum_ok {
            a
        } else {
            sl2_check(&gens[1], &gens[0], m, "E = u_S2, F = u_S1")
        }
    });
    let commute = (n >= 4).then(|| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let adjacent = (i + 1) % n == j || (j + 1) % n == i || i == j;
                adjacent || bracket(&gens[i], &gens[j]).iter().flatten().all(|x| x.is_zero())
            })
        })
    });
    let verdict = d == expected
        && irreducible
        && sl2.as_ref().is_none_or(|s| s.he_ok && s.hf_ok && s.spectrum_ok)
        && commute.unwrap_or(true);
    Ok(LieReport {
        n,
        m,
        dimension: d,
        expected_dimension: expected,
        algebra_dimension: alg,
        irreducible,
        sl2,
        nonadjacent_commute: commute,
        verdict,
    })
}
