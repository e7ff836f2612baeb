use serde::Serialize;

use crate::exactarith::hermite;
use crate::finmod::fp::FMat;
use crate::finmod::FinAlgebra;
use crate::orders::*;
use crate::zeta::{maximal_overorder, BlockStep};

use super::QhaError;

fn lattice_sum(order: &Order, a: &Lattice, b: &Lattice) -> Lattice {
    let ring = &order.ring;
    let mut rows = a.h.basis(ring);
    rows.extend(b.h.basis(ring));
    Lattice { amb: a.amb.clone(), shift: a.shift, h: hermite(ring, &rows, a.n()) }
}

/// Image of the radical of End(Y) in Y.
fn end_radical_image(order: &Order, y: &Lattice) -> Result<Lattice, QhaError> {
    let ring = &order.ring;
    let p = order.p();
    let hs = order.hom(y, y)?;
    let ctx = order.coords_ctx(y)?;
    let rows = y.h.basis(ring);
    let scaled = |w: Vec<u64>| -> Result<Vec<u64>, QhaError> {
        if hs.scale >= 0 {
            Ok(w.iter().map(|&x| ring.mul_pi(x, hs.scale as u32)).collect())
        } else {
            let d = (-hs.scale) as u32;
            if w.iter().any(|&x| x != 0 && ring.val(x) < d) {
                return Err(OrderError::InvalidSpec("endomorphism leaves the lattice".into()).into());
            }
            Ok(w.iter().map(|&x| ring.div_pi(x, d)).collect())
        }
    };
    let mut mats: Vec<FMat> = Vec::new();
    for f in &hs.maps {
        let mut m = Vec::new();
        for h in &rows {
            let w = scaled(crate::exactarith::vec_mat(ring, h, f))?;
            let c = order
                .coords(&ctx, &w)
                .ok_or_else(|| OrderError::InvalidSpec("endomorphism leaves the lattice".into()))?;
            m.push(c.iter().map(|&x| ring.residue(x)).collect());
        }
        mats.push(m);
    }
    let e = FinAlgebra::from_matrices(p, &mats)?;
    let combos: Vec<_> = e.radical().iter().map(|c| order.combo(c, &hs.maps)).collect();
    let pi_y: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| ring.mul_pi(x, 1)).collect()).collect();
    Ok(order.image_sum(y, y, hs.scale, &combos, &pi_y)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleStep {
    pub removed: String,
    pub remaining: Vec<String>,
    /// log_p of the index of the approximation image in X
    pub approx_index_exp: i64,
    pub approx_in_subcat: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeChain {
    pub catalog: Vec<String>,
    /// indecomposable summands of M_0, M_1, ... up to stabilization
    pub layers: Vec<Vec<String>>,
    /// ind C_n
    pub levels: Vec<Vec<String>>,
    pub steps: Vec<SingleStep>,
    /// classes of the stable layer, the catalog of a hereditary overring
    pub hereditary_terminal: Vec<String>,
    /// classes removed after the stable layer to reach a maximal overorder
    pub extension: Vec<String>,
    /// where the chain ends
    pub terminal: Vec<String>,
}

pub struct CvChain {
    pub report: LatticeChain,
    pub steps: Vec<BlockStep>,
}

/// The iterated radical chain on the sum of all indecomposable lattices in
/// modules embedding in V, refined so that each step removes one class
/// (larger ambient rank first, then catalog order).
pub fn build_cv_chain(order: &Order, v: &AModule) -> Result<CvChain, QhaError> {
    let ind = order.ind_lattices(Some(v))?;
    let k = ind.entries.len();
    let labels = ind.labels();
    let index_of = |r: &IndRef| ind.entries.iter().position(|e| &e.at == r);
    let mut layers: Vec<Vec<usize>> = vec![(0..k).collect()];
    loop {
        let cur = layers.last().unwrap().clone();
        if layers.len() > k + 2 {
            return Err(QhaError::NoStabilization("radical layers keep changing".into()));
        }
        let mut next = Vec::new();
        for &y in &cur {
            let yl = &ind.entries[y].lattice;
            let others: Vec<Lattice> =
                cur.iter().filter(|&&x| x != y).map(|&x| ind.entries[x].lattice.clone()).collect();
            let tr = order.trace(yl, &others)?;
            let r = lattice_sum(order, &tr, &end_radical_image(order, yl)?);
            let cat = order.iso_catalog(&yl.amb.v)?;
            let c = order.classify(&cat, &r)?;
            for part in &cat.classes[c].parts {
                let i = index_of(part)
                    .ok_or_else(|| QhaError::NoStabilization("radical image outside the catalog".into()))?;
                if !next.contains(&i) {
                    next.push(i);
                }
            }
        }
        next.sort_unstable();
        if next == cur {
            break;
        }
        layers.push(next);
    }
    let m = layers.len();
    let levels: Vec<Vec<usize>> = (0..m)
        .map(|n| {
            let mut s: Vec<usize> = layers[n..].iter().flatten().copied().collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let lat = |i: usize| ind.entries[i].lattice.clone();
    let approx_of = |x: usize, rest: &[usize]| -> Result<(Lattice, bool), QhaError> {
        let xl = &ind.entries[x].lattice;
        let approx = order.trace(xl, &rest.iter().map(|&y| lat(y)).collect::<Vec<_>>())?;
        let in_sub = if approx.h.is_full(&order.ring) {
            let cat = order.iso_catalog(&xl.amb.v)?;
            let c = order.classify(&cat, &approx)?;
            cat.classes[c].parts.iter().all(|r| index_of(r).is_some_and(|i| rest.contains(&i)))
        } else {
            false
        };
        Ok((approx, in_sub))
    };
    let mut current = levels[0].clone();
    let mut steps = Vec::new();
    let mut report_steps = Vec::new();
    let mut push = |x: usize, current: &mut Vec<usize>, approx: Lattice, in_sub: bool| {
        let rest: Vec<usize> = current.iter().filter(|&&y| y != x).copied().collect();
        report_steps.push(SingleStep {
            removed: labels[x].clone(),
            remaining: rest.iter().map(|&i| labels[i].clone()).collect(),
            approx_index_exp: approx.volume() - ind.entries[x].lattice.volume(),
            approx_in_subcat: in_sub,
        });
        steps.push(BlockStep {
            c: current.iter().map(|&i| ind.entries[i].at.clone()).collect(),
            c_prime: rest.iter().map(|&i| ind.entries[i].at.clone()).collect(),
            removed: ind.entries[x].at.clone(),
            approx,
        });
        *current = rest;
    };
    for n in 0..m.saturating_sub(1) {
        let mut removed: Vec<usize> = levels[n].iter().filter(|x| !levels[n + 1].contains(x)).copied().collect();
        removed.sort_by_key(|&x| (std::cmp::Reverse(ind.entries[x].lattice.n()), x));
        for x in removed {
            let rest: Vec<usize> = current.iter().filter(|&&y| y != x).copied().collect();
            let (approx, in_sub) = approx_of(x, &rest)?;
            push(x, &mut current, approx, in_sub);
        }
    }
    // A hereditary terminal that is not maximal: keep rejecting one class at
    // a time, always one whose approximation lies in the rest.
    let (max_spec, _) = maximal_overorder(order)?;
    let mut target: Vec<usize> = Vec::new();
    for e in order.overring_restriction(&max_spec, Some(v))?.entries {
        let i = index_of(&e.at)
            .ok_or_else(|| QhaError::NoStabilization("maximal overorder class outside the catalog".into()))?;
        target.push(i);
    }
    target.sort_unstable();
    let mut extension = Vec::new();
    if !target.is_empty() && target.iter().all(|t| current.contains(t)) {
        while current.len() > target.len() {
            let mut cands: Vec<usize> = current.iter().filter(|x| !target.contains(x)).copied().collect();
            cands.sort_by_key(|&x| (std::cmp::Reverse(ind.entries[x].lattice.n()), x));
            let mut chosen = None;
            for x in cands {
                let rest: Vec<usize> = current.iter().filter(|&&y| y != x).copied().collect();
                let (approx, in_sub) = approx_of(x, &rest)?;
                if in_sub {
                    chosen = Some((x, approx));
                    break;
                }
            }
            let (x, approx) = chosen
                .ok_or_else(|| QhaError::NotRejective("no class of the hereditary terminal can be rejected".into()))?;
            extension.push(x);
            push(x, &mut current, approx, true);
        }
    }
    let mut levels = levels;
    let mut cur = layers.last().unwrap().clone();
    for &x in &extension {
        cur.retain(|&y| y != x);
        levels.push(cur.clone());
    }
    let names = |s: &Vec<usize>| s.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>();
    Ok(CvChain {
        report: LatticeChain {
            catalog: labels.clone(),
            layers: layers.iter().map(names).collect(),
            levels: levels.iter().map(names).collect(),
            steps: report_steps,
            hereditary_terminal: names(layers.last().unwrap()),
            extension: names(&extension),
            terminal: names(&current),
        },
        steps,
    })
}
