use serde::Serialize;

use super::algebra::{CoordSolver, FinAlgebra};
use super::fp::*;
use super::module::*;
use super::FinError;

/// Indecomposable projectives and simples, one per isoclass.
#[derive(Clone, Debug)]
pub struct BasicData {
    pub idempotents: Vec<Vec<u64>>,
    /// Basis of A e_i inside A.
    pub proj_basis: Vec<FMat>,
    pub projectives: Vec<FinModule>,
    pub simples: Vec<FinModule>,
    pub end_dims: Vec<usize>,
}

/// Complete set of primitive orthogonal idempotents (from the algebra if
/// supplied, otherwise from decomposing the regular module).
pub fn primitive_idempotents(a: &FinAlgebra, budget: Budget) -> Result<Vec<Vec<u64>>, FinError> {
    if let Some(e) = &a.idempotents {
        return Ok(e.clone());
    }
    let reg = FinModule::regular(a);
    let parts = decompose(a, &reg, budget)?;
    // 1 = sum of components along the decomposition
    let mut all: FMat = Vec::new();
    let mut owner = Vec::new();
    for (k, (_, basis)) in parts.iter().enumerate() {
        for b in basis {
            all.push(b.clone());
            owner.push(k);
        }
    }
    let solver = CoordSolver::new(a.p, &all);
    let c = solver.coords(&a.one);
    let mut out = vec![vec![0u64; a.dim]; parts.len()];
    for ((cj, b), &k) in c.iter().zip(&all).zip(&owner) {
        for (o, &y) in out[k].iter_mut().zip(b) {
            *o = (*o + cj * y) % a.p;
        }
    }
    Ok(out)
}

pub fn basic_data(a: &FinAlgebra, budget: Budget) -> Result<BasicData, FinError> {
    let idem = primitive_idempotents(a, budget)?;
    let reg = FinModule::regular(a);
    let mut data =
        BasicData { idempotents: vec![], proj_basis: vec![], projectives: vec![], simples: vec![], end_dims: vec![] };
    for e in idem {
        // A e = span of b e over basis b
        let rows: FMat = (0..a.dim).map(|i| a.mul(&super::algebra::basis_vec(a.dim, i), &e)).collect();
        let pb = row_basis(a.p, &rows);
        let pm = reg.restrict(&pb);
        let s = pm.top(a);
        let mut dup = false;
        for t in &data.simples {
            if matches!(is_isomorphic(a, &s, t, budget), IsoResult::Iso(_)) {
                dup = true;
                break;
            }
        }
        if dup {
            continue;
        }
        let ed = hom_space(a, &s, &s).len();
        data.idempotents.push(e);
        data.proj_basis.push(pb);
        data.projectives.push(pm);
        data.simples.push(s);
        data.end_dims.push(ed);
    }
    Ok(data)
}

/// Minimal projective cover: the cover module, the map to M (M.dim x P.dim)
/// and the list of projective types used.
pub fn projective_cover(a: &FinAlgebra, bd: &BasicData, m: &FinModule) -> (FinModule, FMat, Vec<usize>) {
    let p = a.p;
    let jm = m.radical_sub(a);
    let mut span = jm.clone();
    let mut chosen: Vec<(usize, Vec<u64>)> = Vec::new();
    'types: for (i, e) in bd.idempotents.iter().enumerate() {
        let em = m.action_of(e);
        let cols = ftranspose(&em);
        for x in cols {
            if span.len() == m.dim {
                break 'types;
            }
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let mut t = span.clone();
            t.push(x.clone());
            if rank(p, &t) > span.len() {
                let gen = m.closure(a, &vec![x.clone()]);
                let mut rows = span.clone();
                rows.extend(gen);
                span = row_basis(p, &rows);
                chosen.push((i, x));
            }
        }
    }
    let types: Vec<usize> = chosen.iter().map(|(i, _)| *i).collect();
    if chosen.is_empty() {
        return (FinModule::zero(a), vec![], types);
    }
    let mods: Vec<&FinModule> = types.iter().map(|&i| &bd.projectives[i]).collect();
    let pm = FinModule::direct_sum(&mods);
    let mut cols: FMat = Vec::new();
    for (i, x) in &chosen {
        for v in &bd.proj_basis[*i] {
            cols.push(fmat_vec(p, &m.action_of(v), x));
        }
    }
    (pm, ftranspose(&cols), types)
}

pub fn syzygy(a: &FinAlgebra, bd: &BasicData, m: &FinModule) -> (FinModule, Vec<usize>) {
    if m.dim == 0 {
        return (FinModule::zero(a), vec![]);
    }
    let (pm, map, types) = projective_cover(a, bd, m);
    let ker = nullspace(a.p, &map, pm.dim);
    let ker = if ker.is_empty() { ker } else { row_basis(a.p, &ker) };
    (pm.restrict(&ker), types)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PdValue {
    Finite(usize),
    /// Syzygies repeat up to isomorphism, so the resolution never ends.
    Infinite,
    /// No termination and no repetition detected within the cutoff.
    Cutoff(usize),
}

pub fn proj_dim(a: &FinAlgebra, bd: &BasicData, m: &FinModule, cutoff: usize, budget: Budget) -> PdValue {
    let mut seen: Vec<FinModule> = Vec::new();
    let mut cur = m.clone();
    for n in 0..=cutoff {
        let (om, _) = syzygy(a, bd, &cur);
        if om.dim == 0 {
            return PdValue::Finite(n);
        }
        for s in &seen {
            if s.dim == om.dim && matches!(is_isomorphic(a, s, &om, budget), IsoResult::Iso(_)) {
                return PdValue::Infinite;
            }
        }
        seen.push(om.clone());
        cur = om;
    }
    PdValue::Cutoff(cutoff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DomDim {
    Finite(usize),
    /// The injective coresolution of the regular module ends with all terms projective.
    Infinite,
    AtLeast(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologicalReport {
    pub pd: Vec<PdValue>,
    pub gl_dim: PdValue,
    pub dom_dim: DomDim,
}

pub fn is_projective(a: &FinAlgebra, bd: &BasicData, m: &FinModule) -> bool {
    let (pm, _, _) = projective_cover(a, bd, m);
    pm.dim == m.dim
}

pub fn dominant_dimension(a: &FinAlgebra, bd: &BasicData, cutoff: usize, budget: Budget) -> Result<DomDim, FinError> {
    let op = a.opposite();
    let bd_op = basic_data(&op, budget)?;
    // injective coresolution of A <-> projective resolution of D(A) over A^op
    let proj_inj: Vec<bool> = bd_op.projectives.iter().map(|q| is_projective(a, bd, &q.dual())).collect();
    let mut cur = FinModule::regular(a).dual();
    for i in 0..=cutoff {
        if cur.dim == 0 {
            return Ok(DomDim::Infinite);
        }
        let (pm, map, types) = projective_cover(&op, &bd_op, &cur);
        if types.iter().any(|&t| !proj_inj[t]) {
            return Ok(DomDim::Finite(i));
        }
        let ker = nullspace(a.p, &map, pm.dim);
        let ker = if ker.is_empty() { ker } else { row_basis(a.p, &ker) };
        cur = pm.restrict(&ker);
    }
    Ok(DomDim::AtLeast(cutoff))
}

pub fn homological(a: &FinAlgebra, cutoff: usize, budget: Budget) -> Result<HomologicalReport, FinError> {
    let bd = basic_data(a, budget)?;
    let pd: Vec<PdValue> = bd.simples.iter().map(|s| proj_dim(a, &bd, s, cutoff, budget)).collect();
    let gl_dim = if pd.contains(&PdValue::Infinite) {
        PdValue::Infinite
    } else if let Some(c) = pd.iter().find(|x| matches!(x, PdValue::Cutoff(_))) {
        c.clone()
    } else {
        PdValue::Finite(pd.iter().map(|x| if let PdValue::Finite(n) = x { *n } else { 0 }).max().unwrap_or(0))
    };
    let dom_dim = dominant_dimension(a, &bd, cutoff, budget)?;
    Ok(HomologicalReport { pd, gl_dim, dom_dim })
}
