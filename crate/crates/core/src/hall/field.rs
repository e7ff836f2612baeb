use super::HallError;

/// GF(q) by addition and multiplication tables. Elements are 0..q, with
/// 0 and 1 the field's zero and one; for q = p^k an element is the base-p
/// encoding of a polynomial of degree < k modulo a fixed irreducible.
#[derive(Clone, Debug)]
pub struct Gf {
    pub q: usize,
    pub p: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn digits(mut x: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |a, &x| a * p + x)
}

/// Product of two polynomials over F_p reduced by the monic `modulus`
/// (coefficients lowest first, length k + 1).
fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len() - 1;
    let mut c = vec![0usize; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    for i in (k..c.len()).rev() {
        let t = c[i];
        if t != 0 {
            for (j, &m) in modulus.iter().enumerate() {
                c[i - k + j] = (c[i - k + j] + p - (t * m) % p) % p;
            }
        }
    }
    c.truncate(k);
    c
}

/// The first monic modulus of degree k over F_p whose quotient ring has no
/// zero divisors, i.e. an irreducible.
fn irreducible(p: usize, k: usize) -> Vec<usize> {
    let q = p.pow(k as u32);
    'cand: for low in 0..q {
        let mut m = digits(low, p, k);
        m.push(1);
        if m[0] == 0 {
            continue;
        }
        for a in 1..q {
            for b in 1..q {
                let pa = digits(a, p, k);
                let pb = digits(b, p, k);
                if poly_mulmod(&pa, &pb, &m, p).iter().all(|&x| x == 0) {
                    continue 'cand;
                }
            }
        }
        return m;
    }
    unreachable!("an irreducible polynomial exists in every degree")
}

impl Gf {
    pub fn new(q: usize) -> Result<Self, HallError> {
        let (p, k) = prime_power(q).ok_or_else(|| HallError::BadField(format!("{q} is not a prime power")))?;
        if q > 64 {
            return Err(HallError::BudgetExceeded(format!("field of size {q}")));
        }
        let modulus = if k > 1 { irreducible(p, k) } else { vec![0, 1] };
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as u16;
                mul[a * q + b] =
                    if k == 1 { ((a * b) % p) as u16 } else { undigits(&poly_mulmod(&da, &db, &modulus, p), p) as u16 };
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16).collect();
        let inv =
            (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16 }).collect();
        Ok(Gf { q, p, add, mul, neg, inv })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }
}

pub type GMat = Vec<Vec<u16>>;

pub fn gzeros(r: usize, c: usize) -> GMat {
    vec![vec![0; c]; r]
}

/// Row vector times matrix.
pub fn gvec_mat(f: &Gf, v: &[u16], a: &GMat) -> Vec<u16> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![0u16; cols];
    for (x, row) in v.iter().zip(a) {
        if *x == 0 {
            continue;
        }
        for (o, &y) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(*x, y));
        }
    }
    out
}

pub fn gmat_mul(f: &Gf, a: &GMat, b: &GMat) -> GMat {
    a.iter().map(|r| gvec_mat(f, r, b)).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn grref(f: &Gf, a: &mut GMat) -> Vec<usize> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, k);
        let s = f.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let t = a[i][c];
                for j in 0..cols {
                    let v = f.mul(t, a[r][j]);
                    a[i][j] = f.sub(a[i][j], v);
                }
            }
        }
        piv.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    piv
}

pub fn grank(f: &Gf, a: &GMat) -> usize {
    let mut b = a.clone();
    grref(f, &mut b).len()
}

/// All subspaces of F_q^d of dimension k, each as its RREF basis.
pub fn subspaces(f: &Gf, d: usize, k: usize) -> Vec<(GMat, Vec<usize>)> {
    let mut out = Vec::new();
    if k > d {
        return out;
    }
    let mut piv: Vec<usize> = (0..k).collect();
    loop {
        // free positions: row r, column c > piv[r], c not a pivot
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|r| ((piv[r] + 1)..d).filter(|c| !piv.contains(c)).map(move |c| (r, c))).collect();
        let total = f.q.checked_pow(free.len() as u32).unwrap_or(usize::MAX);
        for mut code in 0..total {
            let mut m = gzeros(k, d);
            for (r, &c) in piv.iter().enumerate() {
                m[r][c] = 1;
            }
            for &(r, c) in &free {
                m[r][c] = (code % f.q) as u16;
                code /= f.q;
            }
            out.push((m, piv.clone()));
        }
        // next k-combination of 0..d
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if piv[i] < d - k + i {
                piv[i] += 1;
                for j in i + 1..k {
                    piv[j] = piv[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Whether v lies in the row space of an RREF basis with the given pivots.
pub fn in_span(f: &Gf, basis: &GMat, piv: &[usize], v: &[u16]) -> bool {
    reduce(f, basis, piv, v).iter().all(|&x| x == 0)
}

/// v minus its projection along the RREF basis.
pub fn reduce(f: &Gf, basis: &GMat, piv: &[usize], v: &[u16]) -> Vec<u16> {
    let mut w = v.to_vec();
    for (row, &c) in basis.iter().zip(piv) {
        let t = w[c];
        if t != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(t, y));
            }
        }
    }
    w
}
