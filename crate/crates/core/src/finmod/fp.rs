//! Dense linear algebra over F_p, p < 2^31.

pub type FMat = Vec<Vec<u64>>;

#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    crate::exactarith::modinv_small(a, p)
}

pub fn fzeros(r: usize, c: usize) -> FMat {
    vec![vec![0; c]; r]
}

pub fn fidentity(n: usize) -> FMat {
    let mut m = fzeros(n, n);
    for i in 0..n {
        m[i][i] = 1;
    }
    m
}

pub fn fmul(p: u64, a: &FMat, b: &FMat) -> FMat {
    let n = a.len();
    let c = b.first().map_or(0, |r| r.len());
    let mut out = fzeros(n, c);
    for i in 0..n {
        let oi = &mut out[i];
        for (t, brow) in b.iter().enumerate() {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..c {
                oi[j] += x * brow[j];
            }
            if p > 1 << 16 {
                for v in oi.iter_mut() {
                    *v %= p;
                }
            }
        }
        for v in oi.iter_mut() {
            *v %= p;
        }
    }
    out
}

pub fn fmat_vec(p: u64, a: &FMat, v: &[u64]) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(v).fold(0u64, |acc, (&x, &y)| (acc + x * y) % p)).collect()
}

pub fn fadd(p: u64, a: &FMat, b: &FMat) -> FMat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| (u + v) % p).collect()).collect()
}

pub fn fsub(p: u64, a: &FMat, b: &FMat) -> FMat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| (u + p - v) % p).collect()).collect()
}

pub fn fscale(p: u64, s: u64, a: &FMat) -> FMat {
    a.iter().map(|r| r.iter().map(|&x| x * s % p).collect()).collect()
}

pub fn ftranspose(a: &FMat) -> FMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn fis_zero(a: &FMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(p: u64, a: &mut FMat) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_multiple_of(p)) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = a[r].clone();
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = p - a[i][c];
                for (x, &y) in a[i].iter_mut().zip(&prow) {
                    if y != 0 {
                        *x = (*x + f * y) % p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(p: u64, a: &FMat) -> usize {
    let mut b = a.clone();
    rref(p, &mut b).len()
}

/// Basis of the row space in reduced echelon form.
pub fn row_basis(p: u64, rows: &FMat) -> FMat {
    let mut b = rows.clone();
    let piv = rref(p, &mut b);
    b.truncate(piv.len());
    b
}

/// Basis of {x : A x = 0}.
pub fn nullspace(p: u64, a: &FMat, ncols: usize) -> FMat {
    let mut b = a.clone();
    let piv = rref(p, &mut b);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![0; ncols];
        x[f] = 1;
        for (i, &pc) in piv.iter().enumerate() {
            x[pc] = (p - b[i][f] % p) % p;
        }
        out.push(x);
    }
    out
}

pub fn finverse(p: u64, a: &FMat) -> Option<FMat> {
    let n = a.len();
    let mut aug: FMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| (i == j) as u64));
            v
        })
        .collect();
    let piv = rref(p, &mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn fdet_nonzero(p: u64, a: &FMat) -> bool {
    rank(p, a) == a.len()
}

/// Solve A x = b.
pub fn fsolve(p: u64, a: &FMat, b: &[u64]) -> Option<Vec<u64>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: FMat = a
        .iter()
        .zip(b)
        .map(|(r, &y)| {
            let mut v = r.clone();
            v.push(y % p);
            v
        })
        .collect();
    let piv = rref(p, &mut aug);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0; ncols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][ncols];
    }
    Some(x)
}

/// Coordinates of v in terms of the given independent rows, if v is in their span.
pub fn coords_in(p: u64, basis: &FMat, v: &[u64]) -> Option<Vec<u64>> {
    if basis.is_empty() {
        return if v.iter().all(|&x| x % p == 0) { Some(vec![]) } else { None };
    }
    fsolve(p, &ftranspose(basis), v)
}

pub fn fpow(p: u64, a: &FMat, mut e: u64) -> FMat {
    let mut r = fidentity(a.len());
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = fmul(p, &r, &b);
        }
        b = fmul(p, &b, &b);
        e >>= 1;
    }
    r
}

pub fn is_nilpotent(p: u64, a: &FMat) -> bool {
    fis_zero(&fpow(p, a, a.len() as u64))
}

/// Linear combination sum c_i M_i.
pub fn fcombo(p: u64, coeffs: &[u64], mats: &[FMat]) -> FMat {
    let (r, c) = (mats[0].len(), mats[0].first().map_or(0, |x| x.len()));
    let mut out = fzeros(r, c);
    for (&k, m) in coeffs.iter().zip(mats) {
        if k == 0 {
            continue;
        }
        for i in 0..r {
            for j in 0..c {
                out[i][j] = (out[i][j] + k * m[i][j]) % p;
            }
        }
    }
    out
}

/// Iterate over all vectors of F_p^n as digit tuples.
pub fn all_vectors(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as u128).pow(n as u32);
    (0..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = (k % p as u128) as u64;
                k /= p as u128;
                d
            })
            .collect()
    })
}

/// Nonzero vectors whose first nonzero entry is 1 (one per line).
pub fn projective_points(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    all_vectors(p, n).filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
}
