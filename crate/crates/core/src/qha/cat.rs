use serde::Serialize;

use crate::finmod::fp::*;
use crate::finmod::*;

use super::QhaError;

/// A finite additive category add(X_1 + ... + X_k) of modules over an
/// algebra, with Hom bases between the chosen indecomposables.
#[derive(Clone, Debug)]
pub struct Cat {
    pub a: FinAlgebra,
    pub labels: Vec<String>,
    pub mods: Vec<FinModule>,
    /// hom[i][j]: basis of Hom(X_i, X_j) as X_j.dim x X_i.dim matrices
    pub hom: Vec<Vec<Vec<FMat>>>,
    pub budget: Budget,
}

#[derive(Clone, Debug, Serialize)]
pub struct Approximation {
    pub x: String,
    pub dim: usize,
    /// dimension of the image of the universal approximation (the trace)
    pub image_dim: usize,
    /// indecomposable summands of that image, if it lies in the subcategory
    pub summands: Vec<String>,
    pub monic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub removed: Vec<String>,
    pub approximations: Vec<Approximation>,
    /// every radical map between indecomposables of C factors through C'
    pub radical_ok: bool,
    pub radical_failure: Option<(String, String)>,
    pub verdict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
}

fn mat_compose(p: u64, g: &FMat, f: &FMat) -> FMat {
    if g.is_empty() || f.is_empty() {
        return vec![];
    }
    fmul(p, g, f)
}

impl Cat {
    pub fn new(a: FinAlgebra, labels: Vec<String>, mods: Vec<FinModule>, budget: Budget) -> Self {
        let hom = mods.iter().map(|x| mods.iter().map(|y| hom_space(&a, x, y)).collect()).collect();
        Cat { a, labels, mods, hom, budget }
    }

    pub fn len(&self) -> usize {
        self.mods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mods.is_empty()
    }

    /// The dual category over the opposite algebra; left notions here are
    /// right notions there.
    pub fn dual(&self) -> Cat {
        let k = self.len();
        let hom = (0..k).map(|i| (0..k).map(|j| self.hom[j][i].iter().map(ftranspose).collect()).collect()).collect();
        Cat {
            a: self.a.opposite(),
            labels: self.labels.clone(),
            mods: self.mods.iter().map(|m| m.dual()).collect(),
            hom,
            budget: self.budget,
        }
    }

    /// Radical of End(X_i), as matrices.
    fn end_radical(&self, i: usize) -> Result<Vec<FMat>, QhaError> {
        let basis = &self.hom[i][i];
        if basis.is_empty() {
            return Ok(vec![]);
        }
        let e = FinAlgebra::from_matrices(self.a.p, basis)?;
        Ok(e.radical().iter().map(|c| fcombo(self.a.p, c, basis)).collect())
    }

    /// rad(X_i, X_j).
    pub fn rad(&self, i: usize, j: usize) -> Result<Vec<FMat>, QhaError> {
        if i == j {
            self.end_radical(i)
        } else {
            Ok(self.hom[i][j].clone())
        }
    }

    /// Span of the maps X_i -> X_j factoring through add of `through`.
    fn factoring(&self, i: usize, j: usize, through: &[usize]) -> FMat {
        let p = self.a.p;
        let mut rows = Vec::new();
        for &z in through {
            for f in &self.hom[i][z] {
                for g in &self.hom[z][j] {
                    let c = mat_compose(p, g, f);
                    if !c.is_empty() {
                        rows.push(flatten(&c));
                    }
                }
            }
        }
        if rows.is_empty() {
            rows
        } else {
            row_basis(p, &rows)
        }
    }

    /// The first pair (X, X') of C with a radical map not factoring through C'.
    pub fn radical_failure(&self, c: &[usize], cp: &[usize]) -> Result<Option<(usize, usize)>, QhaError> {
        let p = self.a.p;
        for &i in c {
            for &j in c {
                let rad = self.rad(i, j)?;
                if rad.is_empty() {
                    continue;
                }
                let fac = self.factoring(i, j, cp);
                let mut all = fac.clone();
                all.extend(rad.iter().map(flatten));
                if rank(p, &all) > fac.len() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Which catalog entry a module is isomorphic to, among `among`.
    pub fn find_iso(&self, m: &FinModule, among: &[usize]) -> Result<Option<usize>, QhaError> {
        for &k in among {
            if self.mods[k].dim != m.dim {
                continue;
            }
            match is_isomorphic(&self.a, &self.mods[k], m, self.budget) {
                IsoResult::Iso(_) => return Ok(Some(k)),
                IsoResult::NotIso => {}
                IsoResult::Undecided => return Err(QhaError::Undecided(format!("comparison with {}", self.labels[k]))),
            }
        }
        Ok(None)
    }

    /// The right add(C')-approximation of X_x by the trace of C' in X_x; it
    /// is the image of every approximation, so a monic one exists iff the
    /// trace lies in add C'.
    pub fn approximation(&self, x: usize, cp: &[usize]) -> Result<Approximation, QhaError> {
        let p = self.a.p;
        let xm = &self.mods[x];
        let mut cols = Vec::new();
        for &z in cp {
            for f in &self.hom[z][x] {
                cols.extend(ftranspose(f));
            }
        }
        let t = if cols.is_empty() { vec![] } else { row_basis(p, &cols) };
        let mut summands = Vec::new();
        let mut monic = true;
        if !t.is_empty() {
            let tm = xm.restrict(&t);
            for (s, _) in decompose(&self.a, &tm, self.budget)? {
                match self.find_iso(&s, cp)? {
                    Some(k) => summands.push(self.labels[k].clone()),
                    None => {
                        monic = false;
                        summands.clear();
                        break;
                    }
                }
            }
        }
        Ok(Approximation { x: self.labels[x].clone(), dim: xm.dim, image_dim: t.len(), summands, monic })
    }

    /// Checks that C' inside C is rejective on the given side: a monic right
    /// (epic left) approximation of every X in C, and no radical map of C
    /// survives modulo C'.
    pub fn check_step(&self, c: &[usize], cp: &[usize], side: Side) -> Result<StepReport, QhaError> {
        if side == Side::Left {
            return self.dual().check_step(c, cp, Side::Right);
        }
        let approximations: Vec<Approximation> =
            c.iter().filter(|x| !cp.contains(x)).map(|&x| self.approximation(x, cp)).collect::<Result<_, _>>()?;
        let fail = self.radical_failure(c, cp)?;
        let radical_ok = fail.is_none();
        let verdict = radical_ok && approximations.iter().all(|a| a.monic);
        Ok(StepReport {
            removed: c.iter().filter(|x| !cp.contains(x)).map(|&x| self.labels[x].clone()).collect(),
            approximations,
            radical_ok,
            radical_failure: fail.map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone())),
            verdict,
        })
    }
}

/// Fails with the first X lacking a monic approximation, or the first pair
/// with a surviving radical map.
pub fn verify_rejective_step(cat: &Cat, c: &[usize], cp: &[usize], side: Side) -> Result<StepReport, QhaError> {
    let r = cat.check_step(c, cp, side)?;
    if let Some(a) = r.approximations.iter().find(|a| !a.monic) {
        return Err(QhaError::NotRejective(a.x.clone()));
    }
    if let Some((x, y)) = &r.radical_failure {
        return Err(QhaError::NotRejective(format!("radical map {x} -> {y}")));
    }
    Ok(r)
}

/// Sorted union of index sets.
pub fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut v: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

// ----- the endomorphism algebra -----

/// Gamma = End(X_1 + ... + X_k), with one primitive idempotent per X_i.
pub struct Gamma {
    pub alg: FinAlgebra,
    pub idem: Vec<Vec<u64>>,
    pub radical: FMat,
}

pub fn gamma(cat: &Cat) -> Result<Gamma, QhaError> {
    let p = cat.a.p;
    let k = cat.len();
    let mut off = vec![0usize; k + 1];
    for i in 0..k {
        off[i + 1] = off[i] + cat.mods[i].dim;
    }
    let n = off[k];
    // basis element (i, j, t) is hom[i][j][t] placed in block (j, i)
    let mut mats: Vec<FMat> = Vec::new();
    let mut start = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in 0..k {
            start[i][j] = mats.len();
            for f in &cat.hom[i][j] {
                let mut m = fzeros(n, n);
                for (r, row) in f.iter().enumerate() {
                    for (c, &x) in row.iter().enumerate() {
                        m[off[j] + r][off[i] + c] = x;
                    }
                }
                mats.push(m);
            }
        }
    }
    let d = mats.len();
    let alg = FinAlgebra::from_matrices(p, &mats)?;
    let mut idem = Vec::new();
    let mut radical = Vec::new();
    for i in 0..k {
        let basis = &cat.hom[i][i];
        let solver = CoordSolver::new(p, &basis.iter().map(flatten).collect::<Vec<_>>());
        let c = solver
            .try_coords(&flatten(&fidentity(cat.mods[i].dim)))
            .ok_or_else(|| QhaError::Undecided("identity outside End".into()))?;
        let mut e = vec![0u64; d];
        e[start[i][i]..start[i][i] + c.len()].copy_from_slice(&c);
        idem.push(e);
        let ea = FinAlgebra::from_matrices(p, basis)?;
        for r in ea.radical() {
            let mut v = vec![0u64; d];
            v[start[i][i]..start[i][i] + r.len()].copy_from_slice(r);
            radical.push(v);
        }
        for j in 0..k {
            if j != i {
                for t in 0..cat.hom[i][j].len() {
                    radical.push(basis_vec(d, start[i][j] + t));
                }
            }
        }
    }
    let radical = if radical.is_empty() { radical } else { row_basis(p, &radical) };
    alg.set_radical(radical.clone());
    let alg = alg.with_idempotents(idem.clone());
    Ok(Gamma { alg, idem, radical })
}

impl Gamma {
    /// [S](M, M): the ideal generated by the idempotents of S.
    pub fn ideal(&self, s: &[usize]) -> FMat {
        let a = &self.alg;
        if s.is_empty() {
            return vec![];
        }
        let all: FMat = (0..a.dim).map(|i| basis_vec(a.dim, i)).collect();
        let es: FMat = s.iter().map(|&i| self.idem[i].clone()).collect();
        let left = a.span_products(&all, &es);
        a.span_products(&left, &all)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeredityStep {
    pub ideal_dim: usize,
    pub idempotent: bool,
    pub iji_zero: bool,
    pub projective_left: bool,
    pub projective_right: bool,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeredityChain {
    pub gamma_dim: usize,
    /// dimensions of I_0 = Gamma, ..., I_m = 0
    pub ideal_dims: Vec<usize>,
    /// step n checks I_n / I_{n+1} inside Gamma / I_{n+1}
    pub steps: Vec<HeredityStep>,
    pub gl_dim: PdValue,
    pub verdict: bool,
}

fn quotient_alg(g: &Gamma, ideal: &FMat) -> Result<(FinAlgebra, FMat), QhaError> {
    let a = &g.alg;
    if ideal.is_empty() {
        let lifts = (0..a.dim).map(|i| basis_vec(a.dim, i)).collect();
        return Ok((a.clone(), lifts));
    }
    let (q, lifts) = a.quotient(ideal)?;
    let img = |rows: &FMat| -> FMat {
        let v: FMat =
            rows.iter().map(|r| a.quotient_coords(ideal, &lifts, r)).filter(|r| r.iter().any(|&x| x != 0)).collect();
        if v.is_empty() {
            v
        } else {
            row_basis(a.p, &v)
        }
    };
    q.set_radical(img(&g.radical));
    let idem: FMat =
        g.idem.iter().map(|e| a.quotient_coords(ideal, &lifts, e)).filter(|e| e.iter().any(|&x| x != 0)).collect();
    let q = q.with_idempotents(idem);
    Ok((q, lifts))
}

fn left_projective(a: &FinAlgebra, ideal: &FMat, budget: Budget) -> Result<bool, QhaError> {
    let bd = basic_data(a, budget)?;
    let m = FinModule::regular(a).restrict(ideal);
    Ok(is_projective(a, &bd, &m))
}

/// Certificates for the ideals [C_n](M, M) of a chain C_0 > ... > C_m = 0.
pub fn heredity_chain(cat: &Cat, levels: &[Vec<usize>], cutoff: usize) -> Result<HeredityChain, QhaError> {
    let g = gamma(cat)?;
    let p = g.alg.p;
    let ideals: Vec<FMat> = levels.iter().map(|s| g.ideal(s)).collect();
    let mut steps = Vec::new();
    for n in 0..levels.len().saturating_sub(1) {
        let (q, lifts) = quotient_alg(&g, &ideals[n + 1])?;
        let ibar: FMat = {
            let v: FMat = ideals[n]
                .iter()
                .map(|r| {
                    if ideals[n + 1].is_empty() {
                        r.clone()
                    } else {
                        g.alg.quotient_coords(&ideals[n + 1], &lifts, r)
                    }
                })
                .filter(|r| r.iter().any(|&x| x != 0))
                .collect();
            if v.is_empty() {
                v
            } else {
                row_basis(p, &v)
            }
        };
        let sq = q.span_products(&ibar, &ibar);
        let idempotent = sq.len() == ibar.len();
        let ij = q.span_products(&ibar, q.radical());
        let iji = q.span_products(&ij, &ibar);
        let iji_zero = iji.iter().all(|r| r.iter().all(|&x| x == 0));
        let projective_left = ibar.is_empty() || left_projective(&q, &ibar, cat.budget)?;
        let op = q.opposite();
        op.set_radical(q.radical().clone());
        let projective_right = ibar.is_empty() || left_projective(&op, &ibar, cat.budget)?;
        steps.push(HeredityStep {
            ideal_dim: ibar.len(),
            idempotent,
            iji_zero,
            projective_left,
            projective_right,
            verdict: idempotent && iji_zero && projective_left,
        });
    }
    let gl_dim = homological(&g.alg, cutoff, cat.budget)?.gl_dim;
    let verdict = steps.iter().all(|s| s.verdict);
    Ok(HeredityChain {
        gamma_dim: g.alg.dim,
        ideal_dims: ideals.iter().map(|i| i.len()).collect(),
        steps,
        gl_dim,
        verdict,
    })
}

/// Like `heredity_chain`, but fails with the first violated certificate.
pub fn certify_heredity(cat: &Cat, levels: &[Vec<usize>], cutoff: usize) -> Result<HeredityChain, QhaError> {
    let h = heredity_chain(cat, levels, cutoff)?;
    for (n, s) in h.steps.iter().enumerate() {
        let what = if !s.idempotent {
            "I^2 != I"
        } else if !s.projective_left {
            "I not projective"
        } else if !s.iji_zero {
            "IJI != 0"
        } else {
            continue;
        };
        return Err(QhaError::HeredityFailed(format!("step {n}: {what}")));
    }
    Ok(h)
}
