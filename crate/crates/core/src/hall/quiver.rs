use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactarith::{poly_add, poly_mul, poly_scale, poly_trim, q, Q};

use super::field::*;
use super::HallError;

/// Cyclic quiver on Z/n with one arrow i -> i - 1 at every vertex. This is
/// the orientation in which the indecomposable projective lattice P_i of the
/// triangular order has radical P_{i-1}.
pub fn target(n: usize, i: usize) -> usize {
    (i + n - 1) % n
}

/// Iso type of a nilpotent representation: for every vertex a, the lengths
/// of the uniserial summands with top S_a, in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiPartition(pub Vec<Vec<usize>>);

impl MultiPartition {
    pub fn empty(n: usize) -> Self {
        MultiPartition(vec![vec![]; n])
    }

    /// The uniserial S_{a,j}: top S_a, length j.
    pub fn segment(n: usize, a: usize, j: usize) -> Self {
        let mut m = Self::empty(n);
        m.0[a].push(j);
        m
    }

    pub fn simple(n: usize, a: usize) -> Self {
        Self::segment(n, a, 1)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn normalized(mut self) -> Self {
        for p in self.0.iter_mut() {
            p.retain(|&x| x > 0);
            p.sort_unstable_by(|a, b| b.cmp(a));
        }
        self
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        let n = self.n();
        let mut d = vec![0usize; n];
        for (a, parts) in self.0.iter().enumerate() {
            for &j in parts {
                for k in 0..j {
                    d[(a + n * j - k) % n] += 1;
                }
            }
        }
        d
    }

    pub fn size(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .0
            .iter()
            .map(|p| format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", s.join(""))
    }
}

/// Basis of a sum of uniserials: for segment s, the (vertex, index) of
/// b_{s,k}, k = 0 at the top; plus the dimension vector.
pub fn segment_positions(n: usize, segs: &[(usize, usize)]) -> (Vec<usize>, Vec<Vec<(usize, usize)>>) {
    let mut dims = vec![0usize; n];
    let mut pos = Vec::new();
    for &(a, j) in segs {
        let mut v = Vec::new();
        for k in 0..j {
            let x = (a + n * j - k) % n;
            v.push((x, dims[x]));
            dims[x] += 1;
        }
        pos.push(v);
    }
    (dims, pos)
}

/// Representation over GF(q): `maps[i]` sends V_i to V_{i-1}, acting on rows.
#[derive(Clone, Debug)]
pub struct Rep {
    pub n: usize,
    pub dims: Vec<usize>,
    pub maps: Vec<GMat>,
}

impl Rep {
    pub fn zero(n: usize) -> Self {
        Rep { n, dims: vec![0; n], maps: vec![vec![]; n] }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Direct sum of uniserials; `segs` lists (top, length).
    pub fn from_segments(n: usize, segs: &[(usize, usize)]) -> Self {
        let (dims, pos) = segment_positions(n, segs);
        let mut maps: Vec<GMat> = (0..n).map(|i| gzeros(dims[i], dims[target(n, i)])).collect();
        for v in &pos {
            for k in 0..v.len().saturating_sub(1) {
                let (x, r) = v[k];
                let (_, c) = v[k + 1];
                maps[x][r][c] = 1;
            }
        }
        Rep { n, dims, maps }
    }

    pub fn from_partition(m: &MultiPartition) -> Self {
        let segs: Vec<(usize, usize)> =
            m.0.iter().enumerate().flat_map(|(a, p)| p.iter().map(move |&j| (a, j))).collect();
        Self::from_segments(m.n(), &segs)
    }

    /// Composite of the k arrows from vertex v + k down to v.
    fn path(&self, f: &Gf, v: usize, k: usize) -> GMat {
        let n = self.n;
        let start = (v + k) % n;
        let mut m: GMat = (0..self.dims[start])
            .map(|i| {
                let mut r = vec![0u16; self.dims[start]];
                r[i] = 1;
                r
            })
            .collect();
        let mut x = start;
        for _ in 0..k {
            m = gmat_mul(f, &m, &self.maps[x]);
            x = target(n, x);
        }
        m
    }

    fn path_rank(&self, f: &Gf, v: usize, k: usize) -> usize {
        if self.dims[(v + k) % self.n] == 0 || self.dims[v] == 0 {
            return 0;
        }
        grank(f, &self.path(f, v, k))
    }
}

/// Iso type from the ranks of path composites: with t(v, k) the multiplicity
/// of S_v in the k-th radical layer, the number of summands with top a and
/// length j is t(a - j + 1, j - 1) - t(a - j, j).
pub fn rep_iso_type(f: &Gf, r: &Rep) -> Result<MultiPartition, HallError> {
    let n = r.n;
    let total = r.total_dim();
    if (0..n).any(|v| r.path_rank(f, v, total + 1) != 0) {
        return Err(HallError::NotNilpotent("the cycle does not act nilpotently".into()));
    }
    let rk = |v: usize, k: usize| r.path_rank(f, v, k) as i64;
    let t = |v: usize, k: usize| rk(v, k) - rk(v, k + 1);
    let mut out = MultiPartition::empty(n);
    for a in 0..n {
        for j in 1..=total {
            let hi = (a + n * j + 1 - j) % n;
            let lo = (a + n * j - j) % n;
            let l = t(hi, j - 1) - t(lo, j);
            for _ in 0..l {
                out.0[a].push(j);
            }
        }
    }
    Ok(out.normalized())
}

/// A subrepresentation: an RREF basis and its pivots at every vertex.
pub type SubRep = Vec<(GMat, Vec<usize>)>;

/// Number of subspace tuples the search would visit.
pub fn search_size(f: &Gf, dims: &[usize], dimw: &[usize]) -> u128 {
    dims.iter().zip(dimw).map(|(&d, &k)| gauss_binomial(f.q as u128, d, k)).product()
}

pub fn gauss_binomial(q: u128, d: usize, k: usize) -> u128 {
    if k > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(q.pow((d - i) as u32) - 1);
        den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
    }
    num / den
}

pub const SEARCH_CAP: u128 = 20_000_000;

/// Visits every subrepresentation W of `r` with dim W_i = dimw[i].
pub fn for_each_subrep(f: &Gf, r: &Rep, dimw: &[usize], visit: &mut dyn FnMut(&SubRep)) -> Result<(), HallError> {
    let n = r.n;
    if search_size(f, &r.dims, dimw) > SEARCH_CAP {
        return Err(HallError::BudgetExceeded(format!("subrepresentation search over GF({})", f.q)));
    }
    let spaces: Vec<Vec<(GMat, Vec<usize>)>> = (0..n).map(|i| subspaces(f, r.dims[i], dimw[i])).collect();
    let arrow_ok = |w: &SubRep, i: usize| {
        let t = target(n, i);
        let (bt, pt) = &w[t];
        w[i].0.iter().all(|row| in_span(f, bt, pt, &gvec_mat(f, row, &r.maps[i])))
    };
    let mut cur: SubRep = Vec::with_capacity(n);
    fn rec(
        i: usize,
        n: usize,
        spaces: &[Vec<(GMat, Vec<usize>)>],
        cur: &mut SubRep,
        arrow_ok: &dyn Fn(&SubRep, usize) -> bool,
        visit: &mut dyn FnMut(&SubRep),
    ) {
        if i == n {
            if arrow_ok(cur, 0) {
                visit(cur);
            }
            return;
        }
        for s in &spaces[i] {
            cur.push(s.clone());
            if i == 0 || arrow_ok(cur, i) {
                rec(i + 1, n, spaces, cur, arrow_ok, visit);
            }
            cur.pop();
        }
    }
    rec(0, n, &spaces, &mut cur, &arrow_ok, visit);
    Ok(())
}

/// W as a representation in its RREF bases.
pub fn sub_rep(f: &Gf, r: &Rep, w: &SubRep) -> Rep {
    let n = r.n;
    let dims: Vec<usize> = w.iter().map(|(b, _)| b.len()).collect();
    let maps = (0..n)
        .map(|i| {
            let t = target(n, i);
            w[i].0
                .iter()
                .map(|row| {
                    let img = gvec_mat(f, row, &r.maps[i]);
                    w[t].1.iter().map(|&c| img[c]).collect()
                })
                .collect()
        })
        .collect();
    Rep { n, dims, maps }
}

/// r / W, with the non-pivot coordinates as basis.
pub fn quotient_rep(f: &Gf, r: &Rep, w: &SubRep) -> Rep {
    let n = r.n;
    let free: Vec<Vec<usize>> = (0..n).map(|i| (0..r.dims[i]).filter(|c| !w[i].1.contains(c)).collect()).collect();
    let dims: Vec<usize> = free.iter().map(|x| x.len()).collect();
    let maps = (0..n)
        .map(|i| {
            let t = target(n, i);
            free[i]
                .iter()
                .map(|&c| {
                    let img = reduce(f, &w[t].0, &w[t].1, &r.maps[i][c]);
                    free[t].iter().map(|&d| img[d]).collect()
                })
                .collect()
        })
        .collect();
    Rep { n, dims, maps }
}

/// F^mu_{lambda nu}: subrepresentations W of M(mu) with W = M(nu) and
/// M(mu)/W = M(lambda).
pub fn hall_number(
    f: &Gf,
    lambda: &MultiPartition,
    nu: &MultiPartition,
    mu: &MultiPartition,
) -> Result<u64, HallError> {
    let (dl, dn, dm) = (lambda.dim_vector(), nu.dim_vector(), mu.dim_vector());
    if dl.iter().zip(&dn).zip(&dm).any(|((a, b), c)| a + b != *c) {
        return Ok(0);
    }
    let y = Rep::from_partition(mu);
    let mut count = 0u64;
    let mut err = None;
    for_each_subrep(f, &y, &dn, &mut |w| {
        if err.is_some() {
            return;
        }
        let res = rep_iso_type(f, &sub_rep(f, &y, w)).and_then(|s| Ok((s, rep_iso_type(f, &quotient_rep(f, &y, w))?)));
        match res {
            Ok((s, qt)) => {
                if s == *nu && qt == *lambda {
                    count += 1;
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// All iso types with a given dimension vector.
pub fn partitions_with_dim(d: &[usize]) -> Vec<MultiPartition> {
    let n = d.len();
    let total: usize = d.iter().sum();
    // segments in a fixed order; each type is a non-increasing choice sequence
    let segs: Vec<(usize, usize)> = (0..n).flat_map(|a| (1..=total).map(move |j| (a, j))).collect();
    let seg_dim = |&(a, j): &(usize, usize)| {
        let mut v = vec![0usize; n];
        for k in 0..j {
            v[(a + n * j - k) % n] += 1;
        }
        v
    };
    let dims: Vec<Vec<usize>> = segs.iter().map(seg_dim).collect();
    let mut out = Vec::new();
    fn rec(
        start: usize,
        rem: &mut Vec<usize>,
        segs: &[(usize, usize)],
        dims: &[Vec<usize>],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<MultiPartition>,
        n: usize,
    ) {
        if rem.iter().all(|&x| x == 0) {
            let mut m = MultiPartition::empty(n);
            for &(a, j) in cur.iter() {
                m.0[a].push(j);
            }
            out.push(m.normalized());
            return;
        }
        for s in start..segs.len() {
            if dims[s].iter().zip(rem.iter()).all(|(x, r)| x <= r) {
                for (r, x) in rem.iter_mut().zip(&dims[s]) {
                    *r -= x;
                }
                cur.push(segs[s]);
                rec(s, rem, segs, dims, cur, out, n);
                cur.pop();
                for (r, x) in rem.iter_mut().zip(&dims[s]) {
                    *r += x;
                }
            }
        }
    }
    rec(0, &mut d.to_vec(), &segs, &dims, &mut Vec::new(), &mut out, n);
    out.sort();
    out.dedup();
    out
}

/// Elements of the Hall algebra over one field.
pub type HallElem = BTreeMap<MultiPartition, i64>;

pub fn hall_product_at(f: &Gf, x: &HallElem, y: &HallElem) -> Result<HallElem, HallError> {
    let mut out = HallElem::new();
    for (l, a) in x {
        for (nu, b) in y {
            let d: Vec<usize> = l.dim_vector().iter().zip(nu.dim_vector()).map(|(p, q)| p + q).collect();
            for mu in partitions_with_dim(&d) {
                let c = hall_number(f, l, nu, &mu)? as i64;
                if c != 0 {
                    *out.entry(mu).or_insert(0) += a * b * c;
                }
            }
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

// ----- interpolation in q -----

/// Field sizes used as interpolation nodes; 7 is kept back for checks.
pub const SAMPLES: [usize; 10] = [2, 3, 4, 5, 8, 9, 11, 13, 16, 17];
pub const HELD_OUT: usize = 7;

/// Integer polynomial in T, lowest degree first.
pub type ZPoly = Vec<i64>;

pub fn lagrange(points: &[(i64, i64)]) -> Vec<Q> {
    let mut out: Vec<Q> = vec![];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut den = Q::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = poly_mul(&basis, &[q(-xj), Q::one()]);
                den *= q(xi - xj);
            }
        }
        out = poly_add(&out, &poly_scale(&basis, &(q(yi) / den)));
    }
    poly_trim(out)
}

fn to_zpoly(p: &[Q]) -> Option<ZPoly> {
    p.iter().map(|c| if c.is_integer() { i64::try_from(c.to_integer()).ok() } else { None }).collect()
}

pub fn zpoly_eval(p: &[i64], t: i64) -> i64 {
    p.iter().rev().fold(0i64, |a, &c| a * t + c)
}

pub fn zpoly_eval_q(p: &[i64], t: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |a, &c| a * t + q(c))
}

/// Fits one polynomial per key through values at q in SAMPLES, adding nodes
/// until every key's fit is unchanged by one more node (at least 3 nodes).
pub fn stable_fit_many<K: Ord + Clone>(
    mut eval: impl FnMut(&Gf) -> Result<BTreeMap<K, i64>, HallError>,
) -> Result<BTreeMap<K, ZPoly>, HallError> {
    let mut vals: Vec<(i64, BTreeMap<K, i64>)> = Vec::new();
    for &qq in SAMPLES.iter() {
        let f = Gf::new(qq)?;
        vals.push((qq as i64, eval(&f)?));
        if vals.len() < 3 {
            continue;
        }
        let keys: std::collections::BTreeSet<K> = vals.iter().flat_map(|(_, m)| m.keys().cloned()).collect();
        let mut out = BTreeMap::new();
        let mut stable = true;
        for k in keys {
            let pts: Vec<(i64, i64)> = vals.iter().map(|(x, m)| (*x, *m.get(&k).unwrap_or(&0))).collect();
            let a = lagrange(&pts[..pts.len() - 1]);
            let b = lagrange(&pts);
            if a != b {
                stable = false;
                break;
            }
            let z = to_zpoly(&b).ok_or_else(|| HallError::InterpolationUnstable("non-integral fit".into()))?;
            out.insert(k, z);
        }
        if stable {
            out.retain(|_, p| !p.is_empty());
            return Ok(out);
        }
    }
    Err(HallError::InterpolationUnstable(format!("no stable fit with {} nodes", SAMPLES.len())))
}

/// The Hall polynomial phi^mu_{lambda nu}.
pub fn hall_polynomial(lambda: &MultiPartition, nu: &MultiPartition, mu: &MultiPartition) -> Result<ZPoly, HallError> {
    let m = stable_fit_many(|f| Ok(BTreeMap::from([((), hall_number(f, lambda, nu, mu)? as i64)])))?;
    Ok(m.get(&()).cloned().unwrap_or_default())
}

/// Elements of the generic Hall algebra over Z[T].
pub type GenericElem = BTreeMap<MultiPartition, ZPoly>;

fn zpoly_add(a: &[i64], b: &[i64]) -> ZPoly {
    let mut out = vec![0i64; a.len().max(b.len())];
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

pub fn zpoly_mul(a: &[i64], b: &[i64]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// u_lambda u_nu = sum_mu phi^mu_{lambda nu} u_mu, extended bilinearly.
pub fn generic_product(x: &GenericElem, y: &GenericElem) -> Result<GenericElem, HallError> {
    let mut out = GenericElem::new();
    for (l, a) in x {
        for (nu, b) in y {
            let d: Vec<usize> = l.dim_vector().iter().zip(nu.dim_vector()).map(|(p, q)| p + q).collect();
            let mus = partitions_with_dim(&d);
            let phis = stable_fit_many(|f| {
                let mut m = BTreeMap::new();
                for mu in &mus {
                    m.insert(mu.clone(), hall_number(f, l, nu, mu)? as i64);
                }
                Ok(m)
            })?;
            for (mu, phi) in phis {
                let e = out.entry(mu).or_default();
                *e = zpoly_add(e, &zpoly_mul(&zpoly_mul(a, b), &phi));
            }
        }
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}
