use super::{ArithError, ChainRing};

pub type RMat = Vec<Vec<u64>>;

pub fn identity(n: usize) -> RMat {
    let mut m = vec![vec![0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn zeros(r: usize, c: usize) -> RMat {
    vec![vec![0; c]; r]
}

pub fn mat_mul(ring: &ChainRing, a: &RMat, b: &RMat) -> RMat {
    let n = a.len();
    let k = b.len();
    let c = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0; c]; n];
    for i in 0..n {
        for (t, brow) in b.iter().enumerate() {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..c {
                if brow[j] != 0 {
                    out[i][j] = ring.add(out[i][j], ring.mul(x, brow[j]));
                }
            }
        }
    }
    out
}

pub fn vec_mat(ring: &ChainRing, v: &[u64], b: &RMat) -> Vec<u64> {
    let c = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![0; c];
    for (t, brow) in b.iter().enumerate() {
        let x = v[t];
        if x == 0 {
            continue;
        }
        for j in 0..c {
            if brow[j] != 0 {
                out[j] = ring.add(out[j], ring.mul(x, brow[j]));
            }
        }
    }
    out
}

pub fn mat_add(ring: &ChainRing, a: &RMat, b: &RMat) -> RMat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| ring.add(u, v)).collect()).collect()
}

pub fn mat_scale(ring: &ChainRing, s: u64, a: &RMat) -> RMat {
    a.iter().map(|r| r.iter().map(|&x| ring.mul(s, x)).collect()).collect()
}

pub fn transpose(a: &RMat) -> RMat {
    if a.is_empty() {
        return vec![];
    }
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

/// `row += s * other`
#[inline]
pub fn axpy(ring: &ChainRing, row: &mut [u64], s: u64, other: &[u64]) {
    if s == 0 {
        return;
    }
    for (x, &y) in row.iter_mut().zip(other) {
        if y != 0 {
            *x = ring.add(*x, ring.mul(s, y));
        }
    }
}

/// Canonical echelon form of the submodule of (R/pi^m)^d spanned by the
/// given rows.
///
/// `rows[i]` has pivot `pi^exps[i]` in column `i`, zeros to the left, and each
/// entry in a column `j > i` is the canonical residue mod `pi^exps[j]`. A
/// column with no pivot has `exps = m` and a zero row. Two generating sets
/// give the same `Hermite` iff they span the same submodule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hermite {
    pub exps: Vec<u32>,
    pub rows: RMat,
}

impl Hermite {
    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn is_full(&self, ring: &ChainRing) -> bool {
        self.exps.iter().all(|&e| e < ring.m())
    }

    /// Length of (R/pi^m)^d modulo the span, i.e. the sum of pivot exponents.
    pub fn colength(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = self.exps.iter().map(|&e| e as u64).collect();
        for (i, r) in self.rows.iter().enumerate() {
            k.extend_from_slice(&r[i + 1..]);
        }
        k
    }

    /// Nonzero generator rows.
    pub fn basis(&self, ring: &ChainRing) -> RMat {
        self.rows.iter().zip(&self.exps).filter(|(_, &e)| e < ring.m()).map(|(r, _)| r.clone()).collect()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, ring: &ChainRing, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for j in 0..self.dim() {
            let e = self.exps[j];
            if e >= ring.m() || v[j] == 0 {
                continue;
            }
            let (q, _) = ring.split(v[j], e);
            if q != 0 {
                axpy(ring, &mut v, ring.neg(q), &self.rows[j]);
            }
        }
        v
    }

    pub fn contains(&self, ring: &ChainRing, v: &[u64]) -> bool {
        self.reduce(ring, v).iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, ring: &ChainRing, other: &Hermite) -> bool {
        other.rows.iter().zip(&other.exps).filter(|(_, &e)| e < ring.m()).all(|(r, _)| self.contains(ring, r))
    }
}

pub fn hermite(ring: &ChainRing, gens: &[Vec<u64>], d: usize) -> Hermite {
    let m = ring.m();
    let mut pool: Vec<Vec<u64>> = gens.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut rows = vec![vec![0u64; d]; d];
    let mut exps = vec![m; d];
    for col in 0..d {
        let mut best: Option<(u32, usize)> = None;
        for (i, r) in pool.iter().enumerate() {
            if r[col] != 0 {
                let v = ring.val(r[col]);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, i));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((e, bi)) = best else { continue };
        let mut piv = pool.remove(bi);
        let u = ring.div_pi(piv[col], e);
        let uinv = ring.inv(u).expect("unit part");
        if uinv != 1 {
            for x in piv.iter_mut() {
                *x = ring.mul(*x, uinv);
            }
        }
        for r in pool.iter_mut() {
            if r[col] != 0 {
                let q = ring.div_pi(r[col], e);
                axpy(ring, r, ring.neg(q), &piv);
                debug_assert_eq!(r[col], 0);
            }
        }
        if e > 0 {
            let extra: Vec<u64> = piv.iter().map(|&x| ring.mul_pi(x, m - e)).collect();
            if extra.iter().any(|&x| x != 0) {
                pool.push(extra);
            }
        }
        pool.retain(|r| r.iter().any(|&x| x != 0));
        rows[col] = piv;
        exps[col] = e;
    }
    for i in 0..d {
        if exps[i] >= m {
            continue;
        }
        for j in i + 1..d {
            if exps[j] >= m || rows[i][j] == 0 {
                continue;
            }
            let (q, _) = ring.split(rows[i][j], exps[j]);
            if q != 0 {
                let rj = rows[j].clone();
                axpy(ring, &mut rows[i], ring.neg(q), &rj);
            }
        }
    }
    Hermite { exps, rows }
}

/// Smith form `U * A * V = diag(pi^exps)`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub exps: Vec<u32>,
    pub u: RMat,
    pub v: RMat,
}

pub fn smith(ring: &ChainRing, a: &RMat, ncols: usize) -> Smith {
    let r = a.len();
    let c = ncols;
    let m = ring.m();
    let mut a = a.clone();
    let mut u = identity(r);
    let mut v = identity(c);
    let n = r.min(c);
    let mut exps = vec![m; n];
    for t in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        'outer: for i in t..r {
            for j in t..c {
                if a[i][j] != 0 {
                    let val = ring.val(a[i][j]);
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let Some((e, bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
        }
        let unit = ring.div_pi(a[t][t], e);
        let uinv = ring.inv(unit).unwrap();
        for x in a[t].iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        for x in u[t].iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        let at = a[t].clone();
        let ut = u[t].clone();
        for i in t + 1..r {
            if a[i][t] != 0 {
                let q = ring.neg(ring.div_pi(a[i][t], e));
                axpy(ring, &mut a[i], q, &at);
                axpy(ring, &mut u[i], q, &ut);
            }
        }
        for j in t + 1..c {
            if a[t][j] != 0 {
                let q = ring.neg(ring.div_pi(a[t][j], e));
                for row in a.iter_mut() {
                    let x = row[t];
                    row[j] = ring.add(row[j], ring.mul(q, x));
                }
                for row in v.iter_mut() {
                    let x = row[t];
                    row[j] = ring.add(row[j], ring.mul(q, x));
                }
            }
        }
        exps[t] = e;
    }
    Smith { exps, u, v }
}

/// Elementary divisor exponents.
pub fn smith_exponents(ring: &ChainRing, a: &RMat, ncols: usize) -> Vec<u32> {
    smith(ring, a, ncols).exps
}

/// Solve `x * B = y` for square `B` invertible over K.
///
/// Returns `(x, s)` meaning the solution is `pi^-s * x`. Errors if the
/// determinant eats the whole precision.
pub fn solve_left(ring: &ChainRing, b: &RMat, y: &[u64]) -> Result<(Vec<u64>, u32), ArithError> {
    let n = b.len();
    let sm = smith(ring, b, n);
    if sm.exps.iter().any(|&e| e >= ring.m()) {
        return Err(ArithError::PrecisionExhausted("singular or precision too low in solve".into()));
    }
    // B = U^-1 D V^-1, x = y V D^-1 U
    let yv = vec_mat(ring, y, &sm.v);
    let s = *sm.exps.iter().max().unwrap_or(&0);
    let mut w = vec![0u64; n];
    for i in 0..n {
        // (yv_i / pi^e_i) * pi^s = yv_i * pi^(s - e_i)
        w[i] = ring.mul_pi(yv[i], s - sm.exps[i]);
    }
    Ok((vec_mat(ring, &w, &sm.u), s))
}

/// Solve `x * B = y` for `B` with independent rows (r x ncols, r <= ncols).
///
/// Returns `(x, s)` meaning the solution is `pi^-s * x`; errors if `y` is not
/// in the K-span of the rows.
pub fn solve_left_rect(ring: &ChainRing, b: &RMat, ncols: usize, y: &[u64]) -> Result<(Vec<u64>, u32), ArithError> {
    let r = b.len();
    let sm = smith(ring, b, ncols);
    if sm.exps.iter().any(|&e| e >= ring.m()) {
        return Err(ArithError::PrecisionExhausted("dependent rows or precision too low in solve".into()));
    }
    let yv = vec_mat(ring, y, &sm.v);
    if yv[r..].iter().any(|&x| x != 0) {
        return Err(ArithError::NotInvertible("vector outside the row span".into()));
    }
    let s = *sm.exps.iter().max().unwrap_or(&0);
    let w: Vec<u64> = (0..r).map(|i| ring.mul_pi(yv[i], s - sm.exps[i])).collect();
    Ok((vec_mat(ring, &w, &sm.u), s))
}

/// Generalized index exponent between full lattices of K^d, each given as
/// `pi^-shift * H`: returns `log_p (L : N)`.
pub fn index_exponent(ring: &ChainRing, l: (&Hermite, i64), n: (&Hermite, i64)) -> Result<i64, ArithError> {
    if !l.0.is_full(ring) || !n.0.is_full(ring) {
        return Err(ArithError::PrecisionExhausted("lattice not full at this precision".into()));
    }
    let d = l.0.dim() as i64;
    let vol_l = l.0.colength() as i64 - l.1 * d;
    let vol_n = n.0.colength() as i64 - n.1 * d;
    Ok(vol_n - vol_l)
}

/// Smallest e with pi^e R^d inside the span (the span must be full).
pub fn exponent(ring: &ChainRing, h: &Hermite) -> u32 {
    let b = h.basis(ring);
    smith(ring, &b, h.dim()).exps.into_iter().max().unwrap_or(0)
}

/// Kernel of `a -> a * Phi` from R^t to R^k modulo the row span `n_rows`.
///
/// Returns the echelon form of the kernel inside R^t.
pub fn kernel_mod(ring: &ChainRing, phi: &RMat, n_rows: &RMat, k: usize) -> Hermite {
    let t = phi.len();
    let mut gens = Vec::with_capacity(t + n_rows.len());
    for (i, row) in phi.iter().enumerate() {
        let mut g = row.clone();
        g.resize(k + t, 0);
        g[k + i] = 1;
        gens.push(g);
    }
    for r in n_rows {
        let mut g = r.clone();
        g.resize(k + t, 0);
        gens.push(g);
    }
    let h = hermite(ring, &gens, k + t);
    let rows: RMat = (0..t).map(|i| h.rows[k + i][k..].to_vec()).collect();
    Hermite { exps: h.exps[k..].to_vec(), rows }
}
