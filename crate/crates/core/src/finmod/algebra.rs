use std::sync::OnceLock;

use super::fp::*;
use super::FinError;

/// A finite-dimensional associative unital algebra over F_p given by
/// structure constants: `mult[i][j]` are the coordinates of `e_i e_j`.
#[derive(Clone, Debug)]
pub struct FinAlgebra {
    pub p: u64,
    pub dim: usize,
    pub mult: Vec<Vec<Vec<u64>>>,
    pub one: Vec<u64>,
    /// A complete set of primitive orthogonal idempotents, when the
    /// construction provides one.
    pub idempotents: Option<Vec<Vec<u64>>>,
    gens: OnceLock<Vec<Vec<u64>>>,
    radical: OnceLock<FMat>,
}

/// Solves `c * B = v` for a fixed independent row set `B`.
#[derive(Clone, Debug)]
pub struct CoordSolver {
    p: u64,
    piv: Vec<usize>,
    inv: FMat,
    rows: FMat,
}

impl CoordSolver {
    pub fn new(p: u64, rows: &FMat) -> Self {
        let k = rows.len();
        if k == 0 {
            return CoordSolver { p, piv: vec![], inv: vec![], rows: vec![] };
        }
        let mut r = rows.clone();
        let piv = rref(p, &mut r);
        assert_eq!(piv.len(), k, "CoordSolver needs independent rows");
        let sub: FMat = rows.iter().map(|row| piv.iter().map(|&c| row[c]).collect()).collect();
        let inv = finverse(p, &sub).expect("pivot submatrix invertible");
        CoordSolver { p, piv, inv, rows: rows.clone() }
    }
    pub fn len(&self) -> usize {
        self.piv.len()
    }
    pub fn is_empty(&self) -> bool {
        self.piv.is_empty()
    }
    /// Coordinates assuming `v` lies in the span.
    pub fn coords(&self, v: &[u64]) -> Vec<u64> {
        let k = self.piv.len();
        let mut c = vec![0u64; k];
        for (t, &pc) in self.piv.iter().enumerate() {
            let x = v[pc] % self.p;
            if x == 0 {
                continue;
            }
            for j in 0..k {
                c[j] = (c[j] + x * self.inv[t][j]) % self.p;
            }
        }
        c
    }
    /// Coordinates, or None when `v` is outside the span.
    pub fn try_coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let c = self.coords(v);
        let n = v.len();
        let mut back = vec![0u64; n];
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            for (b, &x) in back.iter_mut().zip(&self.rows[j]) {
                *b = (*b + cj * x) % self.p;
            }
        }
        if back.iter().zip(v).all(|(&a, &b)| a == b % self.p) {
            Some(c)
        } else {
            None
        }
    }
}

pub fn flatten(m: &FMat) -> Vec<u64> {
    m.iter().flat_map(|r| r.iter().copied()).collect()
}

impl FinAlgebra {
    pub fn new(p: u64, mult: Vec<Vec<Vec<u64>>>, one: Vec<u64>) -> Result<Self, FinError> {
        let dim = one.len();
        let a = FinAlgebra { p, dim, mult, one, idempotents: None, gens: OnceLock::new(), radical: OnceLock::new() };
        a.validate()?;
        Ok(a)
    }

    pub fn with_idempotents(mut self, idem: Vec<Vec<u64>>) -> Self {
        self.idempotents = Some(idem);
        self
    }

    fn validate(&self) -> Result<(), FinError> {
        let n = self.dim;
        for i in 0..n {
            let e = basis_vec(n, i);
            if self.mul(&self.one, &e) != e || self.mul(&e, &self.one) != e {
                return Err(FinError::InvalidAlgebra("unit law fails".into()));
            }
        }
        // associativity on basis triples
        for i in 0..n {
            for j in 0..n {
                let ij = &self.mult[i][j];
                for k in 0..n {
                    let left = self.mul(ij, &basis_vec(n, k));
                    let right = self.mul(&basis_vec(n, i), &self.mult[j][k]);
                    if left != right {
                        return Err(FinError::InvalidAlgebra(format!(
                            "associativity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x * y % p;
                for (o, &c) in out.iter_mut().zip(&self.mult[i][j]) {
                    if c != 0 {
                        *o = (*o + xy * c) % p;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    /// Matrix of left multiplication by `a`, acting on column coordinate vectors.
    pub fn left_mat(&self, a: &[u64]) -> FMat {
        let n = self.dim;
        let cols: Vec<Vec<u64>> = (0..n).map(|j| self.mul(a, &basis_vec(n, j))).collect();
        ftranspose(&cols)
    }

    pub fn right_mat(&self, a: &[u64]) -> FMat {
        let n = self.dim;
        let cols: Vec<Vec<u64>> = (0..n).map(|j| self.mul(&basis_vec(n, j), a)).collect();
        ftranspose(&cols)
    }

    /// Subalgebra spanned by the given matrices (which must be closed under
    /// products and contain the identity).
    pub fn from_matrices(p: u64, mats: &[FMat]) -> Result<Self, FinError> {
        let flat: FMat = mats.iter().map(flatten).collect();
        let solver = CoordSolver::new(p, &flat);
        let n = mats.len();
        let mut mult = vec![vec![vec![]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = fmul(p, &mats[i], &mats[j]);
                mult[i][j] = solver
                    .try_coords(&flatten(&prod))
                    .ok_or_else(|| FinError::InvalidAlgebra("matrix span not closed".into()))?;
            }
        }
        let size = mats.first().map_or(0, |m| m.len());
        let one = solver
            .try_coords(&flatten(&fidentity(size)))
            .ok_or_else(|| FinError::InvalidAlgebra("identity not in span".into()))?;
        FinAlgebra::new(p, mult, one)
    }

    pub fn opposite(&self) -> Self {
        let n = self.dim;
        let mult = (0..n).map(|i| (0..n).map(|j| self.mult[j][i].clone()).collect()).collect();
        let mut a = FinAlgebra::new(self.p, mult, self.one.clone()).expect("opposite of valid algebra");
        a.idempotents = self.idempotents.clone();
        a
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    /// Span of products, as echelon rows.
    pub fn span_products(&self, xs: &FMat, ys: &FMat) -> FMat {
        let mut rows = Vec::new();
        for x in xs {
            for y in ys {
                rows.push(self.mul(x, y));
            }
        }
        if rows.is_empty() {
            return vec![];
        }
        row_basis(self.p, &rows)
    }

    /// Subalgebra generated by `gens` together with 1.
    pub fn generated_subalgebra(&self, gens: &FMat) -> FMat {
        let mut basis = row_basis(self.p, &vec![self.one.clone()]);
        loop {
            let mut rows = basis.clone();
            for b in &basis {
                for g in gens {
                    rows.push(self.mul(b, g));
                }
            }
            let nb = row_basis(self.p, &rows);
            if nb.len() == basis.len() {
                return basis;
            }
            basis = nb;
        }
    }

    /// A small algebra generating set (greedy over the basis).
    pub fn generators(&self) -> &Vec<Vec<u64>> {
        self.gens.get_or_init(|| {
            let mut gens: FMat = Vec::new();
            let mut span = self.generated_subalgebra(&gens);
            for i in 0..self.dim {
                if span.len() == self.dim {
                    break;
                }
                let e = basis_vec(self.dim, i);
                let mut test = span.clone();
                test.push(e.clone());
                if rank(self.p, &test) > span.len() {
                    gens.push(e);
                    span = self.generated_subalgebra(&gens);
                }
            }
            gens
        })
    }

    /// Jacobson radical, as echelon basis rows.
    pub fn radical(&self) -> &FMat {
        self.radical.get_or_init(|| radical_trace(self))
    }

    pub fn set_radical(&self, j: FMat) {
        let _ = self.radical.set(j);
    }

    /// Quotient by a two-sided ideal. Returns the quotient and, for each
    /// quotient basis element, its chosen lift.
    pub fn quotient(&self, ideal: &FMat) -> Result<(FinAlgebra, FMat), FinError> {
        let p = self.p;
        let n = self.dim;
        let ib = row_basis(p, ideal);
        let mut lifts = Vec::new();
        let mut span = ib.clone();
        for i in 0..n {
            let e = basis_vec(n, i);
            let mut t = span.clone();
            t.push(e.clone());
            if rank(p, &t) > span.len() {
                span = row_basis(p, &t);
                lifts.push(e);
            }
        }
        let k = lifts.len();
        let mut all = lifts.clone();
        all.extend(ib.iter().cloned());
        let solver = CoordSolver::new(p, &all);
        let proj = |v: &[u64]| -> Vec<u64> { solver.coords(v)[..k].to_vec() };
        let mut mult = vec![vec![vec![]; k]; k];
        for i in 0..k {
            for j in 0..k {
                mult[i][j] = proj(&self.mul(&lifts[i], &lifts[j]));
            }
        }
        let one = proj(&self.one);
        Ok((FinAlgebra::new(p, mult, one)?, lifts))
    }

    /// Coordinates in the quotient by `ideal` given the lifts from [`quotient`].
    pub fn quotient_coords(&self, ideal: &FMat, lifts: &FMat, v: &[u64]) -> Vec<u64> {
        let mut all = lifts.clone();
        all.extend(row_basis(self.p, ideal));
        let solver = CoordSolver::new(self.p, &all);
        solver.coords(v)[..lifts.len()].to_vec()
    }

    pub fn is_nilpotent_elem(&self, a: &[u64]) -> bool {
        is_nilpotent(self.p, &self.left_mat(a))
    }

    pub fn is_unit_elem(&self, a: &[u64]) -> bool {
        fdet_nonzero(self.p, &self.left_mat(a))
    }

    /// Number of simple factors of a commutative semisimple algebra, via the
    /// dimension of the Frobenius-fixed subspace.
    pub fn frobenius_fixed_dim(&self) -> usize {
        let p = self.p;
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            let e = basis_vec(n, i);
            let mut x = e.clone();
            let mut k = 1;
            while k < p {
                x = self.mul(&x, &e);
                k += 1;
            }
            rows.push(x);
        }
        // matrix of x -> x^p minus identity (linear in characteristic p for commutative algebras)
        let frob = ftranspose(&rows);
        let m = fsub(p, &frob, &fidentity(n));
        nullspace(p, &m, n).len()
    }

    /// True when the algebra is local, i.e. A/J is a field.
    pub fn is_local(&self) -> Result<bool, FinError> {
        let j = self.radical().clone();
        if j.len() == self.dim {
            return Ok(false);
        }
        let (q, _) = self.quotient(&j)?;
        if !q.is_commutative() {
            return Ok(false);
        }
        Ok(q.frobenius_fixed_dim() == 1)
    }

    pub fn product(a: &FinAlgebra, b: &FinAlgebra) -> FinAlgebra {
        let (n, m) = (a.dim, b.dim);
        let d = n + m;
        let mut mult = vec![vec![vec![0; d]; d]; d];
        for i in 0..n {
            for j in 0..n {
                mult[i][j][..n].copy_from_slice(&a.mult[i][j]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                mult[n + i][n + j][n..].copy_from_slice(&b.mult[i][j]);
            }
        }
        let mut one = a.one.clone();
        one.extend(b.one.iter().copied());
        FinAlgebra::new(a.p, mult, one).unwrap()
    }

    /// Full matrix algebra M_n(F_p) with basis e_ij (row-major).
    pub fn matrix_algebra(p: u64, n: usize) -> FinAlgebra {
        let mats: Vec<FMat> = (0..n * n)
            .map(|k| {
                let mut m = fzeros(n, n);
                m[k / n][k % n] = 1;
                m
            })
            .collect();
        let idem = (0..n).map(|i| basis_vec(n * n, i * n + i)).collect();
        FinAlgebra::from_matrices(p, &mats).unwrap().with_idempotents(idem)
    }

    /// Upper triangular n x n matrices.
    pub fn upper_triangular(p: u64, n: usize) -> FinAlgebra {
        let mut mats = Vec::new();
        let mut idem_pos = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut m = fzeros(n, n);
                m[i][j] = 1;
                if i == j {
                    idem_pos.push(mats.len());
                }
                mats.push(m);
            }
        }
        let d = mats.len();
        let idem = idem_pos.into_iter().map(|k| basis_vec(d, k)).collect();
        FinAlgebra::from_matrices(p, &mats).unwrap().with_idempotents(idem)
    }

    /// F_p[x]/x^k with basis 1, x, ..., x^{k-1}.
    pub fn truncated_poly(p: u64, k: usize) -> FinAlgebra {
        let mut mult = vec![vec![vec![0; k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                if i + j < k {
                    mult[i][j][i + j] = 1;
                }
            }
        }
        FinAlgebra::new(p, mult, basis_vec(k, 0)).unwrap().with_idempotents(vec![basis_vec(k, 0)])
    }

    /// Group algebra of the cyclic group of order n.
    pub fn cyclic_group(p: u64, n: usize) -> FinAlgebra {
        let mut mult = vec![vec![vec![0; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                mult[i][j][(i + j) % n] = 1;
            }
        }
        FinAlgebra::new(p, mult, basis_vec(n, 0)).unwrap()
    }

    /// Path algebra of a quiver modulo a monomial ideal. `zero_paths` are
    /// arrow sequences (in composition order: first arrow first) that vanish;
    /// every path of length >= `max_len` must vanish so the algebra is finite.
    pub fn path_algebra(
        p: u64,
        vertices: usize,
        arrows: &[(usize, usize)],
        zero_paths: &[Vec<usize>],
        max_len: usize,
    ) -> Result<FinAlgebra, FinError> {
        // enumerate nonzero paths: (start, end, arrow list)
        let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..vertices).map(|v| (v, v, vec![])).collect();
        let kills =
            |w: &[usize]| zero_paths.iter().any(|z| !z.is_empty() && w.windows(z.len()).any(|x| x == z.as_slice()));
        let mut frontier: Vec<(usize, usize, Vec<usize>)> = paths.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (s, t, w) in &frontier {
                for (a, &(src, dst)) in arrows.iter().enumerate() {
                    if src == *t {
                        let mut w2 = w.clone();
                        w2.push(a);
                        if !kills(&w2) {
                            next.push((*s, dst, w2));
                        }
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        if !frontier.is_empty() {
            return Err(FinError::InvalidAlgebra(
                "paths of length max_len survive; algebra not finite under the given bound".into(),
            ));
        }
        let d = paths.len();
        let index = |s: usize, t: usize, w: &[usize]| paths.iter().position(|(a, b, x)| *a == s && *b == t && x == w);
        // product e_i e_j = "do path i, then path j" concatenation
        let mut mult = vec![vec![vec![0; d]; d]; d];
        for (i, (si, ti, wi)) in paths.iter().enumerate() {
            for (j, (sj, tj, wj)) in paths.iter().enumerate() {
                if ti != sj {
                    continue;
                }
                let mut w = wi.clone();
                w.extend(wj);
                if kills(&w) {
                    continue;
                }
                if let Some(k) = index(*si, *tj, &w) {
                    mult[i][j][k] = 1;
                }
            }
        }
        let mut one = vec![0; d];
        for v in 0..vertices {
            one[v] = 1;
        }
        let idem = (0..vertices).map(|v| basis_vec(d, v)).collect();
        Ok(FinAlgebra::new(p, mult, one)?.with_idempotents(idem))
    }
}

pub fn basis_vec(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn int_matpow_trace(a: &FMat, e: u64, modulus: u64) -> u64 {
    let n = a.len();
    let mul = |x: &FMat, y: &FMat| -> FMat {
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                let v = x[i][k];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = ((out[i][j] as u128 + v as u128 * y[k][j] as u128) % modulus as u128) as u64;
                }
            }
        }
        out
    };
    let mut r = fidentity(n);
    let mut b = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(&r, &b);
        }
        b = mul(&b, &b);
        e >>= 1;
    }
    (0..n).fold(0, |acc, i| (acc + r[i][i]) % modulus)
}

/// Radical via the characteristic-p trace refinement on the left regular
/// representation: I_{-1} = A, I_i = {a in I_{i-1} : g_i(a b) = 0 for all b}
/// with g_i(a) = (Tr(lift(a)^{p^i}) mod p^{i+1}) / p^i, and J = I_l,
/// l = floor(log_p dim A).
pub fn radical_trace(a: &FinAlgebra) -> FMat {
    let p = a.p;
    let n = a.dim;
    let mut l = 0u32;
    while (p as u128).pow(l + 1) <= n as u128 {
        l += 1;
    }
    let mut ideal: FMat = (0..n).map(|i| basis_vec(n, i)).collect();
    for i in 0..=l {
        if ideal.is_empty() {
            break;
        }
        let pi = p.pow(i);
        let modulus = p.pow(i + 1);
        // value matrix: rows = current ideal basis, cols = algebra basis b
        let mut vals: FMat = Vec::with_capacity(ideal.len());
        for x in &ideal {
            let row: Vec<u64> = (0..n)
                .map(|k| {
                    let xb = a.mul(x, &basis_vec(n, k));
                    let t = int_matpow_trace(&a.left_mat(&xb), pi, modulus);
                    t / pi
                })
                .collect();
            vals.push(row);
        }
        // combos c with c * vals = 0
        let ker = nullspace(p, &ftranspose(&vals), ideal.len());
        let new: FMat = ker
            .iter()
            .map(|c| {
                let mut v = vec![0u64; n];
                for (cj, x) in c.iter().zip(&ideal) {
                    for (o, &y) in v.iter_mut().zip(x) {
                        *o = (*o + cj * y) % p;
                    }
                }
                v
            })
            .collect();
        ideal = if new.is_empty() { vec![] } else { row_basis(p, &new) };
    }
    ideal
}

/// Exhaustive radical: {x : x a nilpotent for all a}. Test oracle.
pub fn radical_bruteforce(a: &FinAlgebra) -> FMat {
    let p = a.p;
    let n = a.dim;
    let all: Vec<Vec<u64>> = all_vectors(p, n).collect();
    let mut members = Vec::new();
    for x in &all {
        if all.iter().all(|y| a.is_nilpotent_elem(&a.mul(x, y))) {
            members.push(x.clone());
        }
    }
    if members.is_empty() {
        return vec![];
    }
    row_basis(p, &members)
}
