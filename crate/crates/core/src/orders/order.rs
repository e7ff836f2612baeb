use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactarith::*;
use crate::finmod::fp::*;
use crate::finmod::*;

use super::spec::*;
use super::OrderError;

/// Coordinates of V = sum_j S_j^{l_j}: simple by simple, copy by copy.
#[derive(Debug)]
pub struct Ambient {
    pub v: AModule,
    pub n: usize,
    /// (simple, copy) -> first coordinate
    pub offsets: Vec<Vec<usize>>,
    /// Right-action matrices (row vectors) of the order's basis.
    pub act: Vec<RMat>,
}

/// A full lattice pi^{-shift} H in V, with H inside R^n.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub amb: Arc<Ambient>,
    pub shift: i64,
    pub h: Hermite,
}

impl Lattice {
    pub fn n(&self) -> usize {
        self.amb.n
    }

    /// log_p (R^n : L), which may be negative.
    pub fn volume(&self) -> i64 {
        self.h.colength() as i64 - self.shift * self.n() as i64
    }

    pub fn key(&self) -> (i64, Vec<u64>) {
        (self.shift, self.h.key())
    }
}

/// Hom_Lambda(L, M) = span_R { pi^scale * maps[i] } inside Hom_A(V_L, V_M).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub maps: Vec<RMat>,
    pub scale: i64,
    /// Coordinates of the maps w.r.t. the fixed A-basis, in echelon form.
    pub kernel: Hermite,
}

impl HomSpace {
    pub fn volume(&self) -> i64 {
        self.kernel.colength() as i64 + self.scale * self.kernel.dim() as i64
    }
}

#[derive(Clone, Debug)]
pub enum IsoOutcome {
    Iso { scale: i64, map: RMat },
    NotIso,
    Undecided,
}

/// Integer exponents for reading coordinates in a lattice basis.
pub struct Coords {
    sm: Smith,
    s: u32,
}

pub(crate) struct RealOverring {
    pub spec: OverringSpec,
    /// per basis element, per simple
    pub basis: Vec<Vec<RMat>>,
    pub one: Vec<RMat>,
    pub unital: bool,
}

pub struct Order {
    pub spec: OrderSpec,
    pub pres: Presentation,
    pub ring: ChainRing,
    pub budget: Budget,
    /// Caps for the class search behind `iso_catalog`.
    pub enum_opts: super::EnumOptions,
    pub(crate) basis: Vec<Vec<RMat>>,
    /// Lambda / pi Lambda
    pub alg: FinAlgebra,
    /// Primitive idempotents of Lambda/pi Lambda, in basis coordinates.
    pub idem: Vec<Vec<u64>>,
    split_basic: bool,
    pub(crate) overrings: Vec<RealOverring>,
    ambients: Mutex<HashMap<AModule, Arc<Ambient>>>,
    pub(crate) catalogs: Mutex<HashMap<AModule, Arc<super::IsoCatalog>>>,
}

pub(crate) fn realize_pmat(ring: &ChainRing, m: &PMat) -> RMat {
    m.iter().map(|r| r.iter().map(|p| ring.from_poly(p)).collect()).collect()
}

fn flat_blocks(mats: &[RMat]) -> Vec<u64> {
    mats.iter().flat_map(|m| m.iter().flatten().copied()).collect()
}

impl Order {
    pub fn new(spec: &OrderSpec, ring: ChainRing, budget: Budget) -> Result<Order, OrderError> {
        let pres = spec.presentation()?;
        let basis: Vec<Vec<RMat>> =
            pres.basis.iter().map(|b| b.iter().map(|m| realize_pmat(&ring, m)).collect()).collect();
        let r = basis.len();
        let flat: RMat = basis.iter().map(|b| flat_blocks(b)).collect();
        let width = flat[0].len();
        let p = ring.p();
        let coords = |target: &[u64]| -> Result<Vec<u64>, OrderError> {
            let (x, s) = solve_left_rect(&ring, &flat, width, target)
                .map_err(|_| OrderError::InvalidSpec("basis is not closed under multiplication".into()))?;
            let mut c = Vec::with_capacity(r);
            for v in x {
                if ring.val(v) < s && v != 0 {
                    return Err(OrderError::InvalidSpec("basis is not closed under multiplication".into()));
                }
                c.push(ring.div_pi(v, s));
            }
            Ok(c)
        };
        let mut mult = vec![vec![vec![]; r]; r];
        for i in 0..r {
            for j in 0..r {
                let prod: Vec<RMat> = basis[i].iter().zip(&basis[j]).map(|(a, b)| mat_mul(&ring, a, b)).collect();
                let c = coords(&flat_blocks(&prod))?;
                mult[i][j] = c.iter().map(|&x| ring.residue(x)).collect();
            }
        }
        let ones: Vec<RMat> = pres.simples.iter().map(|s| identity(s.dim)).collect();
        let one: Vec<u64> = coords(&flat_blocks(&ones))?.iter().map(|&x| ring.residue(x)).collect();
        let alg = FinAlgebra::new(p, mult, one).map_err(OrderError::Fin)?;
        let idem = primitive_idempotents(&alg, budget).map_err(OrderError::Fin)?;
        let split_basic = alg.dim - alg.radical().len() == idem.len();
        let overrings = pres
            .overrings
            .iter()
            .map(|o| RealOverring {
                basis: o.basis.iter().map(|b| b.iter().map(|m| realize_pmat(&ring, m)).collect()).collect(),
                one: o.one.iter().map(|m| realize_pmat(&ring, m)).collect(),
                unital: o.one.iter().zip(&pres.simples).all(|(m, s)| realize_pmat(&ring, m) == identity(s.dim)),
                spec: o.clone(),
            })
            .collect();
        Ok(Order {
            spec: spec.clone(),
            pres,
            ring,
            budget,
            enum_opts: super::EnumOptions::default(),
            basis,
            alg,
            idem,
            split_basic,
            overrings,
            ambients: Mutex::new(HashMap::new()),
            catalogs: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_enum_options(mut self, opts: super::EnumOptions) -> Self {
        self.enum_opts = opts;
        self
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn r(&self) -> usize {
        self.pres.simples.len()
    }

    /// V = A as a left module.
    pub fn regular_module(&self) -> AModule {
        AModule(self.pres.simples.iter().map(|s| s.l_a).collect())
    }

    pub fn ambient(&self, v: &AModule) -> Arc<Ambient> {
        let mut cache = self.ambients.lock().unwrap();
        if let Some(a) = cache.get(v) {
            return a.clone();
        }
        let mut offsets = Vec::new();
        let mut off = 0;
        for (j, s) in self.pres.simples.iter().enumerate() {
            let mut o = Vec::new();
            for _ in 0..v.0[j] {
                o.push(off);
                off += s.dim;
            }
            offsets.push(o);
        }
        let n = off;
        let act = self.block_right_action(&offsets, n, &self.basis);
        let a = Arc::new(Ambient { v: v.clone(), n, offsets, act });
        cache.insert(v.clone(), a.clone());
        a
    }

    fn block_right_action(&self, offsets: &[Vec<usize>], n: usize, basis: &[Vec<RMat>]) -> Vec<RMat> {
        basis
            .iter()
            .map(|b| {
                let mut g = zeros(n, n);
                for (j, offs) in offsets.iter().enumerate() {
                    let d = self.pres.simples[j].dim;
                    for &o in offs {
                        for r in 0..d {
                            for c in 0..d {
                                // right action uses the transpose
                                g[o + c][o + r] = b[j][r][c];
                            }
                        }
                    }
                }
                g
            })
            .collect()
    }

    // ----- construction -----

    pub fn lattice_from_gens(&self, amb: &Arc<Ambient>, gens: &[Vec<u64>], shift: i64) -> Result<Lattice, OrderError> {
        let h = hermite(&self.ring, gens, amb.n);
        if !h.is_full(&self.ring) {
            return Err(OrderError::PrecisionExhausted(format!("lattice is not full at precision {}", self.ring.m())));
        }
        Ok(Lattice { amb: amb.clone(), shift, h })
    }

    /// Divide out the content so that H is not inside pi R^n.
    pub fn normalize(&self, l: Lattice) -> Lattice {
        let ring = &self.ring;
        let v = l.h.rows.iter().flat_map(|r| r.iter()).filter(|&&x| x != 0).map(|&x| ring.val(x)).min().unwrap_or(0);
        if v == 0 {
            return l;
        }
        let rows: RMat = l.h.rows.iter().map(|r| r.iter().map(|&x| ring.div_pi(x, v)).collect()).collect();
        let h = hermite(ring, &rows, l.n());
        Lattice { amb: l.amb, shift: l.shift - v as i64, h }
    }

    /// The distinguished lattice in V: Lambda itself for V = A, otherwise the
    /// sum of Lambda-spans of the first basis vector of each copy.
    pub fn standard_lattice(&self, v: &AModule) -> Result<Lattice, OrderError> {
        if v.0.len() != self.r() {
            return Err(OrderError::UnsupportedModule(format!(
                "module has {} components, expected {}",
                v.0.len(),
                self.r()
            )));
        }
        if v.is_zero() {
            return Err(OrderError::UnsupportedModule("zero module has no full lattice".into()));
        }
        let amb = self.ambient(v);
        let ring = &self.ring;
        let gens: RMat = if *v == self.regular_module() {
            let v0: Vec<u64> = self.pres.regular.iter().map(|p| ring.from_poly(p)).collect();
            amb.act.iter().map(|g| vec_mat(ring, &v0, g)).collect()
        } else {
            let mut gens = Vec::new();
            for (j, offs) in amb.offsets.iter().enumerate() {
                let d = self.pres.simples[j].dim;
                for &o in offs {
                    let mut e = vec![0u64; amb.n];
                    e[o] = 1;
                    let span: RMat = amb.act.iter().map(|g| vec_mat(ring, &e, g)).collect();
                    let h = hermite(ring, &span, amb.n);
                    let rank = (o..o + d).filter(|&i| h.exps[i] < ring.m()).count();
                    if rank == d {
                        gens.extend(span);
                    } else {
                        for i in o..o + d {
                            let mut u = vec![0u64; amb.n];
                            u[i] = 1;
                            gens.push(u);
                        }
                    }
                }
            }
            gens
        };
        let l = self.lattice_from_gens(&amb, &gens, 0)?;
        Ok(self.normalize(l))
    }

    /// Lattice pi^k L.
    pub fn scale_pi(&self, l: &Lattice, k: i64) -> Lattice {
        Lattice { amb: l.amb.clone(), shift: l.shift - k, h: l.h.clone() }
    }

    // ----- coordinates and the residue module -----

    pub fn coords_ctx(&self, l: &Lattice) -> Result<Coords, OrderError> {
        let b = l.h.basis(&self.ring);
        if b.len() != l.n() {
            return Err(OrderError::PrecisionExhausted("lattice not full".into()));
        }
        let sm = smith(&self.ring, &b, l.n());
        let s = *sm.exps.iter().max().unwrap_or(&0);
        if s >= self.ring.m() {
            return Err(OrderError::PrecisionExhausted("lattice exponent reaches the precision".into()));
        }
        Ok(Coords { sm, s })
    }

    /// Integral coordinates of y (in R^n) w.r.t. the rows of H, or None if y is not in H.
    pub fn coords(&self, c: &Coords, y: &[u64]) -> Option<Vec<u64>> {
        let ring = &self.ring;
        let yv = vec_mat(ring, y, &c.sm.v);
        let mut w = vec![0u64; yv.len()];
        for i in 0..yv.len() {
            w[i] = ring.mul_pi(yv[i], c.s - c.sm.exps[i]);
        }
        let x = vec_mat(ring, &w, &c.sm.u);
        let mut out = Vec::with_capacity(x.len());
        for v in x {
            if v != 0 && ring.val(v) < c.s {
                return None;
            }
            out.push(ring.div_pi(v, c.s));
        }
        Some(out)
    }

    /// Lambda acting on the rows of H, expressed in those rows: one integral
    /// matrix per basis element (row i = coordinates of h_i * b).
    pub fn action_in_basis(&self, l: &Lattice) -> Result<Vec<RMat>, OrderError> {
        let ctx = self.coords_ctx(l)?;
        let rows = l.h.basis(&self.ring);
        l.amb
            .act
            .iter()
            .map(|g| {
                rows.iter()
                    .map(|h| {
                        self.coords(&ctx, &vec_mat(&self.ring, h, g))
                            .ok_or_else(|| OrderError::InvalidSpec("lattice is not stable under the order".into()))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_stable(&self, l: &Lattice) -> bool {
        let rows = l.h.basis(&self.ring);
        l.amb.act.iter().all(|g| rows.iter().all(|h| l.h.contains(&self.ring, &vec_mat(&self.ring, h, g))))
    }

    /// L / pi L as a module over Lambda / pi Lambda.
    pub fn residue_module(&self, l: &Lattice) -> Result<FinModule, OrderError> {
        let acts = self.action_in_basis(l)?;
        let act = acts
            .iter()
            .map(|a| ftranspose(&a.iter().map(|r| r.iter().map(|&x| self.ring.residue(x)).collect()).collect()))
            .collect();
        Ok(FinModule { p: self.p(), dim: l.n(), act })
    }

    /// The sublattice pi L + (lift of sub), for sub inside L/pi L.
    pub fn lift_sub(&self, l: &Lattice, sub: &FMat) -> Result<Lattice, OrderError> {
        let ring = &self.ring;
        let rows = l.h.basis(ring);
        let mut gens: RMat = rows.iter().map(|r| r.iter().map(|&x| ring.mul_pi(x, 1)).collect()).collect();
        for w in sub {
            gens.push(vec_mat(ring, w, &rows));
        }
        self.lattice_from_gens(&l.amb, &gens, l.shift)
    }

    // ----- maximal sublattices and colength enumeration -----

    /// Maximal submodules of L/pi L, as echelon rows.
    fn maximal_residue_subs(&self, m: &FinModule) -> Result<Vec<FMat>, OrderError> {
        let p = self.p();
        let n = m.dim;
        let jm = m.radical_sub(&self.alg);
        let mut out = Vec::new();
        if self.split_basic {
            for j in 0..self.idem.len() {
                let mut rows = jm.clone();
                for (i, e) in self.idem.iter().enumerate() {
                    if i != j {
                        rows.extend(ftranspose(&m.action_of(e)));
                    }
                }
                let q = if rows.is_empty() { vec![] } else { row_basis(p, &rows) };
                if q.len() == n {
                    continue;
                }
                let us = complement(p, &q, n);
                let a = us.len();
                for c in projective_points(p, a) {
                    let t = c.iter().position(|&x| x != 0).unwrap();
                    let mut sub = q.clone();
                    for i in 0..a {
                        if i == t {
                            continue;
                        }
                        let v: Vec<u64> = (0..n).map(|k| (us[i][k] + (p - c[i]) * us[t][k]) % p).collect();
                        sub.push(v);
                    }
                    out.push(row_basis(p, &sub));
                }
            }
        } else {
            let (top, lifts) = m.quotient(&jm);
            let bd = basic_data(&self.alg, self.budget).map_err(OrderError::Fin)?;
            let mut seen = std::collections::HashSet::new();
            for s in &bd.simples {
                let homs = hom_space(&self.alg, &top, s);
                for coef in all_vectors(p, homs.len()) {
                    if coef.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let f = fcombo(p, &coef, &homs);
                    let ker = nullspace(p, &f, top.dim);
                    let mut rows = jm.clone();
                    for k in &ker {
                        let mut v = vec![0u64; n];
                        for (i, &x) in k.iter().enumerate() {
                            for (vv, &y) in v.iter_mut().zip(&lifts[i]) {
                                *vv = (*vv + x * y) % p;
                            }
                        }
                        rows.push(v);
                    }
                    let sub = if rows.is_empty() { vec![] } else { row_basis(p, &rows) };
                    if seen.insert(sub.clone()) {
                        out.push(sub);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn maximal_sublattices(&self, l: &Lattice) -> Result<Vec<Lattice>, OrderError> {
        let m = self.residue_module(l)?;
        self.maximal_residue_subs(&m)?.iter().map(|s| self.lift_sub(l, s)).collect()
    }

    /// All full sublattices of colength exactly k (index p^k), in canonical order.
    pub fn sublattices_of_colength(&self, l: &Lattice, k: usize) -> Result<Vec<Lattice>, OrderError> {
        let mut out = Vec::new();
        self.for_each_level(l, k, &mut |lev, lats| {
            if lev == k {
                out = lats.to_vec();
            }
            Ok(())
        })?;
        out.sort_by_key(|a| a.h.key());
        Ok(out)
    }

    /// Breadth-first descent through maximal sublattices: calls `f(k, level)`
    /// for k = 0..=d with all sublattices of colength k (each exactly once).
    pub fn for_each_level(
        &self,
        l: &Lattice,
        d: usize,
        f: &mut dyn FnMut(usize, &[Lattice]) -> Result<(), OrderError>,
    ) -> Result<(), OrderError> {
        use rayon::prelude::*;
        let base = l.h.colength();
        if (self.ring.m() as u64) < d as u64 + 2 {
            return Err(OrderError::PrecisionExhausted(format!(
                "precision {} too small for colength {d}",
                self.ring.m()
            )));
        }
        let mut pending: Vec<HashMap<Vec<u64>, Lattice>> = (0..=d).map(|_| HashMap::new()).collect();
        pending[0].insert(l.h.key(), l.clone());
        for k in 0..=d {
            let mut level: Vec<Lattice> = std::mem::take(&mut pending[k]).into_values().collect();
            level.sort_by_key(|a| a.h.key());
            f(k, &level)?;
            if k == d {
                break;
            }
            let children: Vec<Vec<Lattice>> =
                level.par_iter().map(|x| self.maximal_sublattices(x)).collect::<Result<_, _>>()?;
            for c in children.into_iter().flatten() {
                let lev = (c.h.colength() - base) as usize;
                if lev <= d {
                    pending[lev].entry(c.h.key()).or_insert(c);
                }
            }
        }
        Ok(())
    }

    // ----- homomorphisms -----

    /// R-basis of Hom_A(V_L, V_M) as right-multiplication matrices.
    pub fn a_hom_basis(&self, from: &Ambient, to: &Ambient) -> Vec<RMat> {
        let ring = &self.ring;
        let mut out = Vec::new();
        for (j, s) in self.pres.simples.iter().enumerate() {
            for &a in &from.offsets[j] {
                for &b in &to.offsets[j] {
                    for cm in &s.end_basis {
                        let c = realize_pmat(ring, cm);
                        let mut y = zeros(from.n, to.n);
                        for r in 0..s.dim {
                            for k in 0..s.dim {
                                y[a + k][b + r] = c[r][k];
                            }
                        }
                        out.push(y);
                    }
                }
            }
        }
        out
    }

    pub fn exponent(&self, l: &Lattice) -> u32 {
        exponent(&self.ring, &l.h)
    }

    pub fn hom(&self, l: &Lattice, m: &Lattice) -> Result<HomSpace, OrderError> {
        let ring = &self.ring;
        let cr = self.a_hom_basis(&l.amb, &m.amb);
        let t = cr.len();
        let ex_l = self.exponent(l);
        let ex_m = self.exponent(m);
        let scale = (l.shift - m.shift) - ex_l as i64;
        if t == 0 {
            return Ok(HomSpace { maps: vec![], scale, kernel: Hermite { exps: vec![], rows: vec![] } });
        }
        if ex_l + ex_m >= ring.m() {
            return Err(OrderError::PrecisionExhausted(format!("Hom needs precision above {}", ex_l + ex_m)));
        }
        let hl = l.h.basis(ring);
        let (nl, nm) = (l.n(), m.n());
        let k = nl * nm;
        let phi: RMat = cr.iter().map(|y| mat_mul(ring, &hl, y).into_iter().flatten().collect()).collect();
        let hm: RMat = m.h.basis(ring).iter().map(|r| r.iter().map(|&x| ring.mul_pi(x, ex_l)).collect()).collect();
        let mut nrows = Vec::with_capacity(k);
        for blk in 0..nl {
            for r in &hm {
                let mut v = vec![0u64; k];
                v[blk * nm..(blk + 1) * nm].copy_from_slice(r);
                nrows.push(v);
            }
        }
        let ker = kernel_mod(ring, &phi, &nrows, k);
        if !ker.is_full(ring) {
            return Err(OrderError::PrecisionExhausted("Hom lattice not full".into()));
        }
        let maps = ker
            .basis(ring)
            .iter()
            .map(|alpha| {
                let mut y = zeros(l.n(), m.n());
                for (a, c) in alpha.iter().zip(&cr) {
                    if *a != 0 {
                        y = mat_add(ring, &y, &mat_scale(ring, *a, c));
                    }
                }
                y
            })
            .collect();
        Ok(HomSpace { maps, scale, kernel: ker })
    }

    /// Whether pi^scale * map carries L onto M (M in the same ambient).
    pub fn is_onto(&self, l: &Lattice, m: &Lattice, scale: i64, map: &RMat) -> Result<bool, OrderError> {
        let ring = &self.ring;
        let img = mat_mul(ring, &l.h.basis(ring), map);
        let hi = hermite(ring, &img, m.n());
        if !hi.is_full(ring) {
            return Ok(false);
        }
        // image lattice is pi^{-(s_L - scale)} hi
        let img_shift = l.shift - scale;
        let vol_img = hi.colength() as i64 - img_shift * m.n() as i64;
        Ok(vol_img == m.volume())
    }

    /// Isomorphism by witness search over Hom(L, M) / pi Hom(L, M).
    pub fn is_isomorphic(&self, l: &Lattice, m: &Lattice) -> Result<IsoOutcome, OrderError> {
        if l.amb.v != m.amb.v {
            return Ok(IsoOutcome::NotIso);
        }
        let hs = self.hom(l, m)?;
        let t = hs.maps.len();
        if t == 0 {
            return Ok(IsoOutcome::NotIso);
        }
        let p = self.p();
        let try_coef = |coef: &[u64]| -> Result<Option<RMat>, OrderError> {
            if coef.iter().all(|&x| x == 0) {
                return Ok(None);
            }
            let y = self.combo(coef, &hs.maps);
            Ok(if self.is_onto(l, m, hs.scale, &y)? { Some(y) } else { None })
        };
        let space = (p as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
        if space <= self.budget.exhaustive as u128 {
            for coef in all_vectors(p, t) {
                if let Some(y) = try_coef(&coef)? {
                    return Ok(IsoOutcome::Iso { scale: hs.scale, map: y });
                }
            }
            return Ok(IsoOutcome::NotIso);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.budget.seed);
        for _ in 0..self.budget.samples {
            let coef: Vec<u64> = (0..t).map(|_| rng.gen_range(0..p)).collect();
            if let Some(y) = try_coef(&coef)? {
                return Ok(IsoOutcome::Iso { scale: hs.scale, map: y });
            }
        }
        Ok(IsoOutcome::Undecided)
    }

    pub fn combo(&self, coef: &[u64], maps: &[RMat]) -> RMat {
        let ring = &self.ring;
        let (r, c) = (maps[0].len(), maps[0].first().map_or(0, |x| x.len()));
        let mut y = zeros(r, c);
        for (a, mm) in coef.iter().zip(maps) {
            if *a != 0 {
                y = mat_add(ring, &y, &mat_scale(ring, *a, mm));
            }
        }
        y
    }

    /// Sum of f(L) over a set of maps pi^scale * Y into the ambient of `target`,
    /// expressed with the shift of `target`.
    pub fn image_sum(
        &self,
        l: &Lattice,
        target: &Lattice,
        scale: i64,
        maps: &[RMat],
        extra: &[Vec<u64>],
    ) -> Result<Lattice, OrderError> {
        let ring = &self.ring;
        let hl = l.h.basis(ring);
        // f(L) = pi^{-(s_L - scale)} H_L Y; bring to target shift s_T:
        // pi^{-s_T} * pi^{s_T - s_L + scale} H_L Y
        let e = target.shift - l.shift + scale;
        let mut gens: RMat = extra.to_vec();
        for y in maps {
            for row in mat_mul(ring, &hl, y) {
                if e >= 0 {
                    gens.push(row.iter().map(|&x| ring.mul_pi(x, e as u32)).collect());
                } else {
                    let d = (-e) as u32;
                    if row.iter().any(|&x| x != 0 && ring.val(x) < d) {
                        return Err(OrderError::InvalidSpec("image not inside the target lattice".into()));
                    }
                    gens.push(row.iter().map(|&x| ring.div_pi(x, d)).collect());
                }
            }
        }
        let h = hermite(ring, &gens, target.n());
        let out = Lattice { amb: target.amb.clone(), shift: target.shift, h };
        if e < 0 && out.h.is_full(ring) && self.exponent(&out) + (-e) as u32 >= ring.m() {
            return Err(OrderError::PrecisionExhausted("image sum too deep for the precision".into()));
        }
        Ok(out)
    }

    /// Trace of the lattices `from` in X: the sum of f(Z) over all f in Hom(Z, X).
    pub fn trace(&self, x: &Lattice, from: &[Lattice]) -> Result<Lattice, OrderError> {
        let mut gens: RMat = Vec::new();
        for z in from {
            let hs = self.hom(z, x)?;
            if hs.maps.is_empty() {
                continue;
            }
            let part = self.image_sum(z, x, hs.scale, &hs.maps, &[])?;
            gens.extend(part.h.basis(&self.ring));
        }
        Ok(Lattice { amb: x.amb.clone(), shift: x.shift, h: hermite(&self.ring, &gens, x.n()) })
    }

    // ----- direct sums -----

    /// X + Y realized in V_X + V_Y, with copies of X first in every simple block.
    pub fn direct_sum(&self, x: &Lattice, y: &Lattice) -> Result<Lattice, OrderError> {
        let ring = &self.ring;
        let v = x.amb.v.add(&y.amb.v);
        let amb = self.ambient(&v);
        let mut map_x = vec![0usize; x.n()];
        let mut map_y = vec![0usize; y.n()];
        for (j, s) in self.pres.simples.iter().enumerate() {
            let kx = x.amb.offsets[j].len();
            for (c, &o) in x.amb.offsets[j].iter().enumerate() {
                for t in 0..s.dim {
                    map_x[o + t] = amb.offsets[j][c] + t;
                }
            }
            for (c, &o) in y.amb.offsets[j].iter().enumerate() {
                for t in 0..s.dim {
                    map_y[o + t] = amb.offsets[j][kx + c] + t;
                }
            }
        }
        let shift = x.shift.max(y.shift);
        let mut gens = Vec::new();
        for (lat, map) in [(x, &map_x), (y, &map_y)] {
            let e = (shift - lat.shift) as u32;
            for r in lat.h.basis(ring) {
                let mut v = vec![0u64; amb.n];
                for (i, &val) in r.iter().enumerate() {
                    v[map[i]] = ring.mul_pi(val, e);
                }
                gens.push(v);
            }
        }
        Ok(self.normalize(self.lattice_from_gens(&amb, &gens, shift)?))
    }

    // ----- overrings -----

    pub(crate) fn overring_action(&self, o: &RealOverring, amb: &Ambient) -> (Vec<RMat>, RMat) {
        let act = self.block_right_action(&amb.offsets, amb.n, &o.basis);
        let one = self.block_right_action(&amb.offsets, amb.n, std::slice::from_ref(&o.one)).pop().unwrap();
        (act, one)
    }

    /// Whether the overring acts on L (L stable, unit acting as identity).
    pub(crate) fn carries_overring(&self, o: &RealOverring, l: &Lattice) -> bool {
        let ring = &self.ring;
        let (act, one) = self.overring_action(o, &l.amb);
        let rows = l.h.basis(ring);
        if rows.iter().any(|h| vec_mat(ring, h, &one) != *h) {
            return false;
        }
        let den = o.spec.den_exp;
        let scaled: RMat = rows.iter().map(|r| r.iter().map(|&x| ring.mul_pi(x, den)).collect()).collect();
        let target = hermite(ring, &scaled, l.n());
        act.iter().all(|g| rows.iter().all(|h| target.contains(ring, &vec_mat(ring, h, g))))
    }

    /// log_p (Gamma L : L) for a unital integral overring Gamma.
    pub(crate) fn overring_index(&self, o: &RealOverring, l: &Lattice) -> i64 {
        let ring = &self.ring;
        let (act, _) = self.overring_action(o, &l.amb);
        let den = o.spec.den_exp;
        let rows = l.h.basis(ring);
        // Gamma L = pi^{-den} (pi^den L + sum L g)
        let mut gens: RMat = rows.iter().map(|r| r.iter().map(|&x| ring.mul_pi(x, den)).collect()).collect();
        for g in &act {
            for h in &rows {
                gens.push(vec_mat(ring, h, g));
            }
        }
        let gl = hermite(ring, &gens, l.n());
        l.h.colength() as i64 + (den as usize * l.n()) as i64 - gl.colength() as i64
    }

    pub fn overring_names(&self) -> Vec<String> {
        self.overrings.iter().map(|o| o.spec.name.clone()).collect()
    }

    /// Top multiplicities: dim of e_i (L / J L) for the primitive idempotents.
    pub fn top_multiplicities(&self, l: &Lattice) -> Result<Vec<usize>, OrderError> {
        let m = self.residue_module(l)?;
        let p = self.p();
        let jm = m.radical_sub(&self.alg);
        Ok(self
            .idem
            .iter()
            .map(|e| {
                let mut rows = jm.clone();
                rows.extend(ftranspose(&m.action_of(e)));
                rank(p, &rows) - jm.len()
            })
            .collect())
    }

    /// The lattice corresponding to the regular module Lambda inside V_A.
    pub fn regular_lattice(&self) -> Result<Lattice, OrderError> {
        self.standard_lattice(&self.regular_module())
    }

    /// The dual lattice Lambda^# = {a : t(Lambda a) in R} inside V_A.
    pub fn dual_regular_lattice(&self) -> Result<Option<Lattice>, OrderError> {
        let Some(tau) = &self.pres.trace else {
            return Ok(None);
        };
        let ring = &self.ring;
        let amb = self.ambient(&self.regular_module());
        let tau: Vec<u64> = tau.iter().map(|p| ring.from_poly(p)).collect();
        // r_b[k] = sum_i tau_i G_b[i][k], and the right-action matrix is G_b^T
        let rs: RMat = amb
            .act
            .iter()
            .map(|g| {
                (0..amb.n).map(|k| (0..amb.n).fold(0, |acc, i| ring.add(acc, ring.mul(tau[i], g[k][i])))).collect()
            })
            .collect();
        let om = hermite(ring, &rs, amb.n);
        if !om.is_full(ring) {
            return Err(OrderError::InvalidSpec("trace form is degenerate on the order".into()));
        }
        let ht = transpose(&om.basis(ring));
        let mut gens = Vec::new();
        let mut shift = 0u32;
        let mut sols = Vec::new();
        for j in 0..amb.n {
            let mut e = vec![0u64; amb.n];
            e[j] = 1;
            let (x, s) = solve_left(ring, &ht, &e).map_err(OrderError::Arith)?;
            shift = shift.max(s);
            sols.push((x, s));
        }
        for (x, s) in sols {
            gens.push(x.iter().map(|&v| ring.mul_pi(v, shift - s)).collect());
        }
        let l = self.lattice_from_gens(&amb, &gens, shift as i64)?;
        Ok(Some(self.normalize(l)))
    }
}

/// Standard basis vectors completing the echelon rows q to a basis of F_p^n.
pub(crate) fn complement(p: u64, q: &FMat, n: usize) -> FMat {
    let mut span = q.clone();
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![0u64; n];
        e[i] = 1;
        let mut t = span.clone();
        t.push(e.clone());
        if rank(p, &t) > span.len() {
            span = row_basis(p, &t);
            out.push(e);
        }
    }
    out
}
