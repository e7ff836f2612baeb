use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{basis_vec, CoordSolver, FinAlgebra};
use super::fp::*;
use super::FinError;

/// A left module: `act[i]` is the matrix of the i-th algebra basis element
/// acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinModule {
    pub p: u64,
    pub dim: usize,
    pub act: Vec<FMat>,
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoResult {
    Iso(FMat),
    NotIso,
    Undecided,
}

/// Search limits shared by the randomized procedures.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Exhaustive search is used when the search space has at most this many elements.
    pub exhaustive: u64,
    /// Random samples otherwise.
    pub samples: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { exhaustive: 1 << 16, samples: 4096, seed: 0 }
    }
}

impl FinModule {
    pub fn zero(a: &FinAlgebra) -> FinModule {
        FinModule { p: a.p, dim: 0, act: vec![vec![]; a.dim] }
    }

    pub fn regular(a: &FinAlgebra) -> FinModule {
        let act = (0..a.dim).map(|i| a.left_mat(&basis_vec(a.dim, i))).collect();
        FinModule { p: a.p, dim: a.dim, act }
    }

    /// Check that the action respects the structure constants and the unit.
    pub fn check(&self, a: &FinAlgebra) -> bool {
        let n = a.dim;
        if self.act.len() != n {
            return false;
        }
        let id = fidentity(self.dim);
        if self.action_of(&a.one) != id {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = fmul(self.p, &self.act[i], &self.act[j]);
                let rhs = self.action_of(&a.mult[i][j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn action_of(&self, x: &[u64]) -> FMat {
        if self.dim == 0 {
            return vec![];
        }
        fcombo(self.p, x, &self.act)
    }

    /// Submodule generated by the vectors, as echelon rows.
    pub fn closure(&self, a: &FinAlgebra, vecs: &FMat) -> FMat {
        if vecs.is_empty() || self.dim == 0 {
            return vec![];
        }
        let gens: Vec<FMat> = a.generators().iter().map(|g| self.action_of(g)).collect();
        let mut basis = row_basis(self.p, vecs);
        loop {
            let mut rows = basis.clone();
            for g in &gens {
                for b in &basis {
                    rows.push(fmat_vec(self.p, g, b));
                }
            }
            let nb = row_basis(self.p, &rows);
            if nb.len() == basis.len() {
                return basis;
            }
            basis = nb;
        }
    }

    pub fn is_submodule(&self, sub: &FMat) -> bool {
        if sub.is_empty() {
            return true;
        }
        let solver = CoordSolver::new(self.p, &row_basis(self.p, sub));
        self.act.iter().all(|g| sub.iter().all(|v| solver.try_coords(&fmat_vec(self.p, g, v)).is_some()))
    }

    /// Restriction to a submodule with the given independent basis rows.
    pub fn restrict(&self, sub: &FMat) -> FinModule {
        let k = sub.len();
        if k == 0 {
            return FinModule { p: self.p, dim: 0, act: vec![vec![]; self.act.len()] };
        }
        let solver = CoordSolver::new(self.p, sub);
        let act = self
            .act
            .iter()
            .map(|g| {
                let cols: FMat = sub.iter().map(|v| solver.coords(&fmat_vec(self.p, g, v))).collect();
                ftranspose(&cols)
            })
            .collect();
        FinModule { p: self.p, dim: k, act }
    }

    /// Quotient by a submodule. Returns the module and the lifts of its basis.
    pub fn quotient(&self, sub: &FMat) -> (FinModule, FMat) {
        let p = self.p;
        let sb = if sub.is_empty() { vec![] } else { row_basis(p, sub) };
        let mut span = sb.clone();
        let mut lifts = Vec::new();
        for i in 0..self.dim {
            let e = basis_vec(self.dim, i);
            let mut t = span.clone();
            t.push(e.clone());
            if rank(p, &t) > span.len() {
                span = row_basis(p, &t);
                lifts.push(e);
            }
        }
        let k = lifts.len();
        let mut all = lifts.clone();
        all.extend(sb);
        let solver = CoordSolver::new(p, &all);
        let act = self
            .act
            .iter()
            .map(|g| {
                let cols: FMat = lifts.iter().map(|v| solver.coords(&fmat_vec(p, g, v))[..k].to_vec()).collect();
                if k == 0 {
                    vec![]
                } else {
                    ftranspose(&cols)
                }
            })
            .collect();
        (FinModule { p, dim: k, act }, lifts)
    }

    pub fn direct_sum(mods: &[&FinModule]) -> FinModule {
        let p = mods[0].p;
        let d: usize = mods.iter().map(|m| m.dim).sum();
        let nact = mods[0].act.len();
        let act = (0..nact)
            .map(|i| {
                let mut out = fzeros(d, d);
                let mut off = 0;
                for m in mods {
                    for r in 0..m.dim {
                        for c in 0..m.dim {
                            out[off + r][off + c] = m.act[i][r][c];
                        }
                    }
                    off += m.dim;
                }
                out
            })
            .collect();
        FinModule { p, dim: d, act }
    }

    /// Vector-space dual, a module over the opposite algebra.
    pub fn dual(&self) -> FinModule {
        FinModule { p: self.p, dim: self.dim, act: self.act.iter().map(ftranspose).collect() }
    }

    /// J M for an ideal given by basis rows.
    pub fn ideal_times(&self, ideal: &FMat) -> FMat {
        let mut rows = Vec::new();
        for x in ideal {
            let m = self.action_of(x);
            for c in 0..self.dim {
                rows.push(m.iter().map(|r| r[c]).collect());
            }
        }
        if rows.is_empty() {
            return vec![];
        }
        row_basis(self.p, &rows)
    }

    pub fn radical_sub(&self, a: &FinAlgebra) -> FMat {
        self.ideal_times(a.radical())
    }

    pub fn top(&self, a: &FinAlgebra) -> FinModule {
        self.quotient(&self.radical_sub(a)).0
    }

    /// Dimensions of the radical layers M/JM, JM/J^2M, ...
    pub fn radical_layers(&self, a: &FinAlgebra) -> Vec<usize> {
        let mut layers = Vec::new();
        let mut cur: FMat = (0..self.dim).map(|i| basis_vec(self.dim, i)).collect();
        let j = a.radical();
        while !cur.is_empty() {
            let mut rows = Vec::new();
            for x in j {
                let m = self.action_of(x);
                for v in &cur {
                    rows.push(fmat_vec(self.p, &m, v));
                }
            }
            let next = if rows.is_empty() { vec![] } else { row_basis(self.p, &rows) };
            layers.push(cur.len() - next.len());
            if next.len() == cur.len() {
                break;
            }
            cur = next;
        }
        layers
    }
}

/// Basis of Hom_A(M, N) as N.dim x M.dim matrices.
pub fn hom_space(a: &FinAlgebra, m: &FinModule, n: &FinModule) -> Vec<FMat> {
    let p = a.p;
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return vec![];
    }
    let nvar = dm * dn;
    // current solution space, as flattened vectors
    let mut sol: FMat = (0..nvar).map(|i| basis_vec(nvar, i)).collect();
    for g in a.generators() {
        if sol.is_empty() {
            break;
        }
        let gm = m.action_of(g);
        let gn = n.action_of(g);
        // images of each solution vector under X -> gN X - X gM
        let imgs: FMat = sol
            .iter()
            .map(|x| {
                let xm: FMat = (0..dn).map(|r| x[r * dm..(r + 1) * dm].to_vec()).collect();
                let d = fsub(p, &fmul(p, &gn, &xm), &fmul(p, &xm, &gm));
                flatten_m(&d)
            })
            .collect();
        let ker = nullspace(p, &ftranspose(&imgs), sol.len());
        sol = ker
            .iter()
            .map(|c| {
                let mut v = vec![0u64; nvar];
                for (cj, x) in c.iter().zip(&sol) {
                    if *cj == 0 {
                        continue;
                    }
                    for (o, &y) in v.iter_mut().zip(x) {
                        *o = (*o + cj * y) % p;
                    }
                }
                v
            })
            .collect();
        if !sol.is_empty() {
            sol = row_basis(p, &sol);
        }
    }
    sol.iter().map(|x| (0..dn).map(|r| x[r * dm..(r + 1) * dm].to_vec()).collect()).collect()
}

fn flatten_m(m: &FMat) -> Vec<u64> {
    m.iter().flat_map(|r| r.iter().copied()).collect()
}

/// End_A(M) as an algebra (multiplication = composition), with its basis matrices.
pub fn end_algebra(a: &FinAlgebra, m: &FinModule) -> Result<(FinAlgebra, Vec<FMat>), FinError> {
    let basis = hom_space(a, m, m);
    let alg = FinAlgebra::from_matrices(a.p, &basis)?;
    Ok((alg, basis))
}

/// Cheap isomorphism invariants.
pub fn module_invariants(a: &FinAlgebra, m: &FinModule) -> Vec<usize> {
    let mut v = vec![m.dim];
    v.extend(m.radical_layers(a));
    v.push(usize::MAX);
    // socle layers, via the dual under the same radical
    v.extend(m.dual().radical_layers(a));
    v
}

fn random_combo(rng: &mut ChaCha8Rng, p: u64, basis: &[FMat]) -> FMat {
    let c: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(0..p)).collect();
    fcombo(p, &c, basis)
}

pub fn is_isomorphic(a: &FinAlgebra, m: &FinModule, n: &FinModule, budget: Budget) -> IsoResult {
    if m.dim != n.dim {
        return IsoResult::NotIso;
    }
    if m.dim == 0 {
        return IsoResult::Iso(vec![]);
    }
    if module_invariants(a, m) != module_invariants(a, n) {
        return IsoResult::NotIso;
    }
    let h = hom_space(a, m, n);
    if h.is_empty() {
        return IsoResult::NotIso;
    }
    let p = a.p;
    let space = (p as f64).powi(h.len() as i32);
    if space <= budget.exhaustive as f64 {
        for c in all_vectors(p, h.len()) {
            let x = fcombo(p, &c, &h);
            if fdet_nonzero(p, &x) {
                return IsoResult::Iso(x);
            }
        }
        return IsoResult::NotIso;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let x = random_combo(&mut rng, p, &h);
        if fdet_nonzero(p, &x) {
            return IsoResult::Iso(x);
        }
    }
    IsoResult::Undecided
}

/// Find an endomorphism that is neither nilpotent nor invertible.
fn find_splitter(p: u64, end_basis: &[FMat], budget: Budget) -> Option<FMat> {
    let good = |x: &FMat| !fdet_nonzero(p, x) && !is_nilpotent(p, x);
    let space = (p as f64).powi(end_basis.len() as i32);
    if space <= budget.exhaustive as f64 {
        return all_vectors(p, end_basis.len()).map(|c| fcombo(p, &c, end_basis)).find(|x| good(x));
    }
    // basis elements first, then random combinations
    if let Some(x) = end_basis.iter().find(|x| good(x)) {
        return Some(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x9e37_79b9);
    for _ in 0..budget.samples {
        let x = random_combo(&mut rng, p, end_basis);
        if good(&x) {
            return Some(x);
        }
    }
    None
}

/// Indecomposability of M, certified: End(M) local.
pub fn is_indecomposable(a: &FinAlgebra, m: &FinModule, budget: Budget) -> Result<bool, FinError> {
    if m.dim == 0 {
        return Ok(false);
    }
    let (e, basis) = end_algebra(a, m)?;
    if (a.p as f64).powi(basis.len() as i32) <= budget.exhaustive as f64 {
        return Ok(find_splitter(a.p, &basis, budget).is_none());
    }
    e.is_local()
}

/// Decompose into indecomposable summands. Each summand is returned with its
/// basis (rows in M's coordinates); M is the direct sum of these subspaces.
pub fn decompose(a: &FinAlgebra, m: &FinModule, budget: Budget) -> Result<Vec<(FinModule, FMat)>, FinError> {
    let p = a.p;
    let mut out = Vec::new();
    let mut stack: Vec<FMat> = vec![(0..m.dim).map(|i| basis_vec(m.dim, i)).collect()];
    while let Some(sub) = stack.pop() {
        if sub.is_empty() {
            continue;
        }
        let sm = m.restrict(&sub);
        let (e, basis) = end_algebra(a, &sm)?;
        match find_splitter(p, &basis, budget) {
            Some(phi) => {
                let phin = fpow(p, &phi, sm.dim as u64);
                // image and kernel of phi^n are complementary submodules
                let img_cols = ftranspose(&phin);
                let img = row_basis(p, &img_cols);
                let ker = nullspace(p, &phin, sm.dim);
                let lift = |rows: &FMat| -> FMat {
                    rows.iter()
                        .map(|c| {
                            let mut v = vec![0u64; m.dim];
                            for (cj, b) in c.iter().zip(&sub) {
                                for (o, &y) in v.iter_mut().zip(b) {
                                    *o = (*o + cj * y) % p;
                                }
                            }
                            v
                        })
                        .collect()
                };
                stack.push(lift(&ker));
                stack.push(lift(&img));
            }
            None => {
                if (p as f64).powi(basis.len() as i32) > budget.exhaustive as f64 && !e.is_local()? {
                    return Err(FinError::DecompositionUncertified(format!(
                        "no splitting endomorphism found in {} samples for a non-local End of dimension {}",
                        budget.samples,
                        basis.len()
                    )));
                }
                out.push((sm, sub));
            }
        }
    }
    out.reverse();
    Ok(out)
}

/// All submodules, each once, as echelon bases.
pub fn submodules(a: &FinAlgebra, m: &FinModule, cap: usize) -> Result<Vec<FMat>, FinError> {
    let p = a.p;
    let mut seen: HashSet<FMat> = HashSet::new();
    let mut out = vec![];
    let mut frontier: Vec<FMat> = vec![vec![]];
    seen.insert(vec![]);
    out.push(vec![]);
    while let Some(w) = frontier.pop() {
        // add one more cyclic generator from the quotient
        let (q, lifts) = m.quotient(&w);
        for c in projective_points(p, q.dim) {
            let mut v = vec![0u64; m.dim];
            for (cj, l) in c.iter().zip(&lifts) {
                for (o, &y) in v.iter_mut().zip(l) {
                    *o = (*o + cj * y) % p;
                }
            }
            let mut gens = w.clone();
            gens.push(v);
            let nw = m.closure(a, &gens);
            if seen.insert(nw.clone()) {
                if seen.len() > cap {
                    return Err(FinError::BudgetExceeded(format!("more than {cap} submodules")));
                }
                out.push(nw.clone());
                frontier.push(nw);
            }
        }
    }
    out.sort_by_key(|s| s.len());
    Ok(out)
}
