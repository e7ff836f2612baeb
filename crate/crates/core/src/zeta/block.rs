use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;

use crate::exactarith::*;
use crate::orders::*;

use super::*;

/// One step C' < C of a rejective chain with ind C - ind C' = {X}.
#[derive(Clone, Debug)]
pub struct BlockStep {
    pub c: Vec<IndRef>,
    pub c_prime: Vec<IndRef>,
    pub removed: IndRef,
    /// Image of the monic right C'-approximation Y -> X, inside K X.
    pub approx: Lattice,
}

#[derive(Serialize)]
pub struct BlockReport {
    pub removed: String,
    pub approx_index_exp: i64,
    pub labels: Vec<String>,
    /// (1 - C) Z_C(V), same row and column order as `labels`.
    pub transformed: Vec<Vec<Vec<String>>>,
    pub zero_block_ok: bool,
    pub diagonal_block_ok: bool,
    pub verdict: bool,
}

fn in_subcat(parts: &[IndRef], set: &HashSet<IndRef>) -> bool {
    parts.iter().all(|r| set.contains(r))
}

/// Classes of `v` whose indecomposable summands all lie in `set`.
pub fn subcat_classes(order: &Order, v: &AModule, set: &[IndRef]) -> Result<Vec<usize>, ZetaError> {
    if v.is_zero() {
        return Ok(vec![0]);
    }
    let set: HashSet<IndRef> = set.iter().cloned().collect();
    let cat = order.iso_catalog(v)?;
    Ok((0..cat.len()).filter(|&i| in_subcat(&cat.classes[i].parts, &set)).collect())
}

/// X + L in V, or X itself when L is the zero lattice.
fn plus(order: &Order, x: &Lattice, l: Option<&Lattice>) -> Result<Lattice, ZetaError> {
    Ok(match l {
        Some(l) => order.direct_sum(x, l)?,
        None => x.clone(),
    })
}

/// log_p b^X_L with the standard lattice of W as the fixed reference.
fn log_b(order: &Order, x: &Lattice, l: &Lattice, reference: &Lattice, a: &Q) -> Result<Q, ZetaError> {
    let h_l = order.hom(x, l)?.volume();
    let h_ref = order.hom(x, reference)?.volume();
    let idx = reference.volume() - l.volume();
    Ok(q(h_ref - h_l) - a * q(idx))
}

pub fn verify_block_lemma(order: &Order, step: &BlockStep, v: &AModule, d: usize) -> Result<BlockReport, ZetaError> {
    if step.c.len() == step.c_prime.len() {
        return Err(ZetaError::EmptyChainStep("the step removes no class".into()));
    }
    let removed: HashSet<&IndRef> = step.c.iter().filter(|r| !step.c_prime.contains(r)).collect();
    if removed.len() != 1 || !removed.contains(&step.removed) {
        return Err(ZetaError::EmptyChainStep("the step must remove exactly the class X".into()));
    }
    let xv = &step.removed.v;
    let Some(w) = v.sub(xv) else {
        return Err(ZetaError::Unsupported("X does not embed in V".into()));
    };
    let r = order.r();
    if r > 1 && !w.is_zero() {
        return Err(ZetaError::Unsupported("block lemma with V/KX nonzero needs a simple algebra".into()));
    }
    let x = order.iso_catalog(xv)?.classes[step.removed.idx].lattice.clone();
    let y = &step.approx;
    let t = y.volume() - x.volume();
    if t < 0 {
        return Err(ZetaError::Unsupported("approximation is not inside X".into()));
    }
    let cat = order.iso_catalog(v)?;
    let sub_c = subcat_classes(order, v, &step.c)?;
    let sub_cp: HashSet<usize> = subcat_classes(order, v, &step.c_prime)?.into_iter().collect();
    let zm = zeta_matrix_sub(order, v, d, &sub_c)?;
    let pos = |k: usize| zm.classes.iter().position(|&c| c == k);

    // classes of W in C, with their lattices
    let w_classes = subcat_classes(order, &w, &step.c)?;
    let w_lats: Vec<Option<Lattice>> = if w.is_zero() {
        vec![None]
    } else {
        let wc = order.iso_catalog(&w)?;
        w_classes.iter().map(|&i| Some(wc.classes[i].lattice.clone())).collect()
    };
    let zw = zeta_matrix_sub(order, &w, d, &w_classes)?;
    let a = if w.is_zero() { Q::zero() } else { q(xv.0[0] as i64) / q(order.pres.simples[0].l_a as i64) };
    let logb: Vec<Q> = if w.is_zero() {
        vec![Q::zero()]
    } else {
        let reference = order.standard_lattice(&w)?;
        w_lats.iter().map(|l| log_b(order, &x, l.as_ref().unwrap(), &reference, &a)).collect::<Result<_, _>>()?
    };
    let mut xl_rows = Vec::new();
    for l in &w_lats {
        let xl = order.classify(&cat, &plus(order, &x, l.as_ref())?)?;
        let yl = order.classify(&cat, &plus(order, y, l.as_ref())?)?;
        let (Some(i), Some(j)) = (pos(xl), pos(yl)) else {
            return Err(ZetaError::Unsupported("X + L or Y + L is not in the subcategory".into()));
        };
        xl_rows.push((i, j));
    }
    let mut transformed = zm.entries.clone();
    for &(i, j) in &xl_rows {
        for c in 0..zm.size() {
            transformed[i][c] = zm.entries[i][c].sub(&zm.entries[j][c].shift(t as usize));
        }
    }
    let mut zero_ok = true;
    let mut diag_ok = true;
    for (li, &(i, _)) in xl_rows.iter().enumerate() {
        for c in 0..zm.size() {
            if sub_cp.contains(&zm.classes[c]) {
                zero_ok &= transformed[i][c].is_zero();
            }
        }
        for (mi, &(k, _)) in xl_rows.iter().enumerate() {
            let b = &logb[li] - &logb[mi];
            let want = series_scale_pow(&zw.entries[li][mi], order.p(), &a, &b).map_err(arith)?;
            diag_ok &= transformed[i][k] == want;
        }
    }
    Ok(BlockReport {
        removed: order.iso_catalog(xv)?.classes[step.removed.idx].label.clone(),
        approx_index_exp: t,
        labels: zm.labels.clone(),
        transformed: transformed.iter().map(|r| r.iter().map(|s| s.to_strings()).collect()).collect(),
        zero_block_ok: zero_ok,
        diagonal_block_ok: diag_ok,
        verdict: zero_ok && diag_ok,
    })
}
