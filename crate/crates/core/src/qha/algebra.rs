use serde::Serialize;

use crate::finmod::fp::*;
use crate::finmod::*;

use super::cat::*;
use super::QhaError;

/// A chain C_0 > C_1 > ... > C_m of subcategories of a catalog.
#[derive(Clone, Debug, Serialize)]
pub struct RejectiveChain {
    pub side: Side,
    pub labels: Vec<String>,
    /// catalog indices of ind C_n, n = 0..=m
    pub levels: Vec<Vec<usize>>,
    /// step n: C_{n+1} inside C_n
    pub steps: Vec<StepReport>,
    /// step n: C_{n+1} inside C_0, the stronger requirement
    pub rejective_in_total: Vec<bool>,
    pub verdict: bool,
}

fn check_chain(cat: &Cat, levels: Vec<Vec<usize>>, side: Side) -> Result<RejectiveChain, QhaError> {
    let mut steps = Vec::new();
    let mut total = Vec::new();
    for n in 0..levels.len().saturating_sub(1) {
        steps.push(cat.check_step(&levels[n], &levels[n + 1], side)?);
        total.push(n == 0 || cat.check_step(&levels[0], &levels[n + 1], side)?.verdict);
    }
    let verdict = steps.iter().all(|s| s.verdict);
    Ok(RejectiveChain { side, labels: cat.labels.clone(), levels, steps, rejective_in_total: total, verdict })
}

/// Indecomposable summands of the given modules up to isomorphism; returns
/// the catalog and, per input module, the catalog indices of its summands.
pub fn collect_ind(
    a: &FinAlgebra,
    items: &[(String, FinModule)],
    budget: Budget,
) -> Result<(Vec<String>, Vec<FinModule>, Vec<Vec<usize>>), QhaError> {
    let mut labels: Vec<String> = Vec::new();
    let mut mods: Vec<FinModule> = Vec::new();
    let mut where_: Vec<Vec<usize>> = Vec::new();
    for (label, m) in items {
        let parts = if m.dim == 0 { vec![] } else { decompose(a, m, budget)? };
        let single = parts.len() == 1;
        let mut at = Vec::new();
        for (k, (s, _)) in parts.into_iter().enumerate() {
            let mut found = None;
            for (i, x) in mods.iter().enumerate() {
                if x.dim != s.dim {
                    continue;
                }
                match is_isomorphic(a, x, &s, budget) {
                    IsoResult::Iso(_) => {
                        found = Some(i);
                        break;
                    }
                    IsoResult::NotIso => {}
                    IsoResult::Undecided => return Err(QhaError::Undecided(format!("summand of {label}"))),
                }
            }
            let i = match found {
                Some(i) => i,
                None => {
                    labels.push(if single { label.clone() } else { format!("{label}[{k}]") });
                    mods.push(s);
                    mods.len() - 1
                }
            };
            if !at.contains(&i) {
                at.push(i);
            }
        }
        at.sort_unstable();
        where_.push(at);
    }
    Ok((labels, mods, where_))
}

/// J^0 = A, J^1, ..., up to the first zero power (included).
pub fn radical_powers(a: &FinAlgebra) -> Vec<FMat> {
    let all: FMat = (0..a.dim).map(|i| basis_vec(a.dim, i)).collect();
    let mut out = vec![all];
    loop {
        let last = out.last().unwrap();
        if last.is_empty() {
            return out;
        }
        let next = a.span_products(last, a.radical());
        out.push(next.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect());
    }
}

pub fn loewy_length(a: &FinAlgebra) -> usize {
    radical_powers(a).len() - 1
}

fn quotient_by(a: &FinAlgebra, ideal: &FMat) -> FinModule {
    FinModule::regular(a).quotient(ideal).0
}

/// C_n = add of A/J^i for 1 <= i <= m - n, a left rejective chain.
pub fn radical_layer_chain(a: &FinAlgebra, budget: Budget) -> Result<(Cat, RejectiveChain), QhaError> {
    let pw = radical_powers(a);
    let m = pw.len() - 1;
    let items: Vec<(String, FinModule)> = (1..=m)
        .rev()
        .map(|i| (if i == m { "Λ".to_string() } else { format!("Λ/J^{i}") }, quotient_by(a, &pw[i])))
        .collect();
    let (labels, mods, at) = collect_ind(a, &items, budget)?;
    // items[k] is A/J^{m-k}
    let levels: Vec<Vec<usize>> = (0..=m)
        .map(|n| {
            let parts: Vec<&[usize]> = (0..m).filter(|&k| m - k <= m - n).map(|k| at[k].as_slice()).collect();
            union(&parts)
        })
        .collect();
    let cat = Cat::new(a.clone(), labels, mods, budget);
    let chain = check_chain(&cat, levels, Side::Left)?;
    Ok((cat, chain))
}

/// M_0 = M, M_{n+1} = M_n J_{End(M_n)}; C_n = add of M_l for l >= n.
pub fn iterated_radical_chain(
    a: &FinAlgebra,
    m: &FinModule,
    label: &str,
    budget: Budget,
) -> Result<(Cat, RejectiveChain, Vec<usize>), QhaError> {
    let p = a.p;
    let mut layers = vec![m.clone()];
    loop {
        let cur = layers.last().unwrap();
        if cur.dim == 0 {
            break;
        }
        if layers.len() > m.dim + 1 {
            return Err(QhaError::NoStabilization("radical images do not reach zero".into()));
        }
        let basis = hom_space(a, cur, cur);
        let e = FinAlgebra::from_matrices(p, &basis)?;
        let mut cols = Vec::new();
        for c in e.radical() {
            cols.extend(ftranspose(&fcombo(p, c, &basis)));
        }
        let cols: FMat = cols.into_iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
        let next = if cols.is_empty() { FinModule::zero(a) } else { cur.restrict(&row_basis(p, &cols)) };
        layers.push(next);
    }
    let items: Vec<(String, FinModule)> =
        layers.iter().enumerate().map(|(l, x)| (format!("{label}_{l}"), x.clone())).collect();
    let (labels, mods, at) = collect_ind(a, &items, budget)?;
    let k = layers.len();
    let levels: Vec<Vec<usize>> =
        (0..k).map(|n| union(&(n..k).map(|l| at[l].as_slice()).collect::<Vec<_>>())).collect();
    let dims = layers.iter().map(|x| x.dim).collect();
    let cat = Cat::new(a.clone(), labels, mods, budget);
    let chain = check_chain(&cat, levels, Side::Right)?;
    Ok((cat, chain, dims))
}

/// The injective cogenerator D(A_A) as a left module.
pub fn dual_regular(a: &FinAlgebra) -> FinModule {
    FinModule::regular(&a.opposite()).dual()
}

#[derive(Clone, Debug, Serialize)]
pub struct RepDimReport {
    /// number m of nonzero layers M_0, ..., M_{m-1}
    pub chain_length: usize,
    pub layer_dims: Vec<usize>,
    pub catalog: Vec<String>,
    pub chain_verdict: bool,
    pub heredity: HeredityChain,
    /// gl.dim End(sum of the layers): an upper bound for rep.dim
    pub bound: usize,
    pub within_2m_minus_2: bool,
}

fn finite(pd: &PdValue, what: &str) -> Result<usize, QhaError> {
    match pd {
        PdValue::Finite(n) => Ok(*n),
        other => Err(QhaError::HeredityFailed(format!("{what}: global dimension {other:?}"))),
    }
}

/// Runs the iterated radical chain on A + D(A) and returns gl.dim of the
/// endomorphism algebra of the layers' indecomposable summands.
pub fn rep_dim_upper(a: &FinAlgebra, budget: Budget) -> Result<RepDimReport, QhaError> {
    let reg = FinModule::regular(a);
    let m = FinModule::direct_sum(&[&reg, &dual_regular(a)]);
    let (cat, chain, dims) = iterated_radical_chain(a, &m, "M", budget)?;
    let len = dims.iter().filter(|&&d| d > 0).count();
    let her = heredity_chain(&cat, &chain.levels, 4 * len + 4)?;
    let bound = finite(&her.gl_dim, "End of the layers")?;
    Ok(RepDimReport {
        chain_length: len,
        layer_dims: dims,
        catalog: cat.labels.clone(),
        chain_verdict: chain.verdict,
        within_2m_minus_2: bound + 2 <= 2 * len.max(1),
        heredity: her,
        bound,
    })
}

/// For a Nakayama algebra: the uniserial modules A e / J^i e.
pub fn nakayama_catalog(a: &FinAlgebra, budget: Budget) -> Result<Vec<(String, FinModule)>, QhaError> {
    let bd = basic_data(a, budget)?;
    let mut out = Vec::new();
    for (t, pm) in bd.projectives.iter().enumerate() {
        let mut sub: FMat = (0..pm.dim).map(|i| basis_vec(pm.dim, i)).collect();
        let mut i = 0;
        while !sub.is_empty() {
            let next = {
                let mut rows = Vec::new();
                for x in a.radical() {
                    let act = pm.action_of(x);
                    for v in &sub {
                        rows.push(fmat_vec(a.p, &act, v));
                    }
                }
                let rows: FMat = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
                if rows.is_empty() {
                    rows
                } else {
                    row_basis(a.p, &rows)
                }
            };
            i += 1;
            out.push((format!("P{}/J^{i}", t + 1), pm.quotient(&next).0));
            sub = next;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuslanderReport {
    pub catalog: Vec<String>,
    pub gamma_dim: usize,
    pub gl_dim: PdValue,
    pub dom_dim: DomDim,
    pub gl_dim_at_most_2: bool,
    pub dom_dim_at_least_2: bool,
    /// A + D(A) lies in add of the catalog, so gl.dim of its End bounds rep.dim
    pub rep_dim_at_most_2: bool,
    pub verdict: bool,
}

/// Gamma = End of all indecomposables; probes the catalog with the summands
/// of the A/J^i and of the duals of the A^op/J^i.
pub fn auslander_check(
    a: &FinAlgebra,
    catalog: Option<Vec<(String, FinModule)>>,
    budget: Budget,
) -> Result<AuslanderReport, QhaError> {
    let items = match catalog {
        Some(c) => c,
        None => nakayama_catalog(a, budget)?,
    };
    let (labels, mods, _) = collect_ind(a, &items, budget)?;
    let cat = Cat::new(a.clone(), labels, mods, budget);
    let all: Vec<usize> = (0..cat.len()).collect();
    let op = a.opposite();
    let mut probes: Vec<FinModule> = Vec::new();
    for (alg, dualize) in [(a, false), (&op, true)] {
        for j in radical_powers(alg).iter().skip(1) {
            let q = quotient_by(alg, j);
            let q = if dualize { q.dual() } else { q };
            if q.dim > 0 {
                probes.extend(decompose(a, &q, budget)?.into_iter().map(|(s, _)| s));
            }
        }
    }
    for s in &probes {
        if cat.find_iso(s, &all)?.is_none() {
            return Err(QhaError::CatalogIncomplete(format!("a summand of dimension {} is missing", s.dim)));
        }
    }
    let g = gamma(&cat)?;
    let h = homological(&g.alg, 8, budget)?;
    let gl_ok = matches!(h.gl_dim, PdValue::Finite(n) if n <= 2);
    let dom_ok = match h.dom_dim {
        DomDim::Finite(n) | DomDim::AtLeast(n) => n >= 2,
        DomDim::Infinite => true,
    };
    Ok(AuslanderReport {
        catalog: cat.labels.clone(),
        gamma_dim: g.alg.dim,
        gl_dim: h.gl_dim,
        dom_dim: h.dom_dim,
        gl_dim_at_most_2: gl_ok,
        dom_dim_at_least_2: dom_ok,
        rep_dim_at_most_2: gl_ok,
        verdict: gl_ok && dom_ok,
    })
}
