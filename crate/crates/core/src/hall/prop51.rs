use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactarith::TruncSeries;
use crate::finmod::fp::{rank, row_basis, FMat};
use crate::orders::*;
use crate::zeta::zeta_matrix;

use super::HallError;

/// Coarse iso invariant of X = L / M: for each radical layer of X, the
/// ranks of the primitive idempotents on that layer.
pub type Fingerprint = Vec<Vec<usize>>;

/// Fingerprint of L / M for a full sublattice M of L with the same shift.
pub fn layer_fingerprint(order: &Order, l: &Lattice, m: &Lattice) -> Result<Fingerprint, OrderError> {
    let ring = &order.ring;
    let target = m.h.colength();
    let mrows = m.h.basis(ring);
    let mut n = l.clone();
    let mut out = Vec::new();
    while n.h.colength() < target {
        let res = order.residue_module(&n)?;
        let ctx = order.coords_ctx(&n)?;
        let mut gens: FMat = res.radical_sub(&order.alg);
        for r in &mrows {
            let c = order.coords(&ctx, r).ok_or_else(|| OrderError::InvalidSpec("M is not inside L".into()))?;
            gens.push(c.iter().map(|&x| ring.residue(x)).collect());
        }
        let sub = row_basis(order.p(), &gens);
        let (layer, _) = res.quotient(&sub);
        if layer.dim == 0 {
            return Err(OrderError::InvalidSpec("radical layers do not reach M".into()));
        }
        out.push(order.idem.iter().map(|e| rank(order.p(), &layer.action_of(e))).collect());
        n = order.lift_sub(&n, &sub)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct XTypeCounts {
    pub layers: Fingerprint,
    pub length: usize,
    /// counts[L][M]: sublattices N of L with N = M and L / N of this type
    pub counts: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop51Report {
    pub d: usize,
    pub labels: Vec<String>,
    pub types: Vec<XTypeCounts>,
    /// sum over types of T^length counts, truncated at T^d
    pub z_matrix: Vec<Vec<Vec<String>>>,
    pub verdict: bool,
}

/// Builds the action matrices of the u_X on the lattice classes of V and
/// compares z = sum_X u_X (#X)^{-s} with the zeta matrix.
pub fn verify_prop51(order: &Order, v: &AModule, d: usize) -> Result<Prop51Report, HallError> {
    let zm = zeta_matrix(order, v, d)?;
    if v.is_zero() {
        let z = vec![vec![TruncSeries::one(d)]];
        return Ok(Prop51Report {
            d,
            labels: zm.labels.clone(),
            types: vec![XTypeCounts { layers: vec![], length: 0, counts: vec![vec![1]] }],
            z_matrix: vec![vec![z[0][0].to_strings()]],
            verdict: z == zm.entries,
        });
    }
    let cat = order.iso_catalog(v)?;
    let size = zm.size();
    let mut table: BTreeMap<Fingerprint, XTypeCounts> = BTreeMap::new();
    for (r, &k) in zm.classes.iter().enumerate() {
        let l = &cat.classes[k].lattice;
        order.for_each_level(l, d, &mut |lev, level| {
            let found: Vec<(usize, Fingerprint)> = level
                .par_iter()
                .map(|m| Ok((order.classify(&cat, m)?, layer_fingerprint(order, l, m)?)))
                .collect::<Result<_, OrderError>>()?;
            for (c, fp) in found {
                let col = zm
                    .classes
                    .iter()
                    .position(|&x| x == c)
                    .ok_or_else(|| OrderError::Undecided("sublattice class outside the catalog".into()))?;
                let e = table.entry(fp.clone()).or_insert_with(|| XTypeCounts {
                    layers: fp,
                    length: lev,
                    counts: vec![vec![0; size]; size],
                });
                e.counts[r][col] += 1;
            }
            Ok(())
        })?;
    }
    let mut z = vec![vec![vec![0u64; d + 1]; size]; size];
    for t in table.values() {
        for i in 0..size {
            for j in 0..size {
                z[i][j][t.length] += t.counts[i][j];
            }
        }
    }
    let z: Vec<Vec<TruncSeries>> = z.iter().map(|r| r.iter().map(|c| TruncSeries::from_counts(c)).collect()).collect();
    Ok(Prop51Report {
        d,
        labels: zm.labels.clone(),
        types: table.into_values().collect(),
        z_matrix: z.iter().map(|r| r.iter().map(|s| s.to_strings()).collect()).collect(),
        verdict: z == zm.entries,
    })
}

/// Matrix of u_X for the type of L / M, with rows and columns in the
/// report's label order.
pub fn action_of_type<'a>(report: &'a Prop51Report, fp: &Fingerprint) -> Option<&'a Vec<Vec<u64>>> {
    report.types.iter().find(|t| &t.layers == fp).map(|t| &t.counts)
}
