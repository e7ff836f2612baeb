use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::finmod::submodules;

use super::order::*;
use super::spec::*;
use super::OrderError;

/// Cheap isomorphism invariants of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Invariants {
    /// log_p (Gamma L : L) for every unital overring Gamma, in listed order.
    pub over: Vec<i64>,
    /// Multiplicity of each simple Lambda-module in the top of L.
    pub top: Vec<usize>,
}

/// An indecomposable class: catalog of `v`, position `idx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndRef {
    pub v: AModule,
    pub idx: usize,
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub label: String,
    pub lattice: Lattice,
    pub inv: Invariants,
    /// Indecomposable summands (a single self-reference when indecomposable).
    pub parts: Vec<IndRef>,
    pub indecomposable: bool,
}

/// All isomorphism classes of full lattices in one A-module.
#[derive(Clone, Debug)]
pub struct IsoCatalog {
    pub v: AModule,
    pub classes: Vec<ClassInfo>,
}

impl IsoCatalog {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct IndEntry {
    pub at: IndRef,
    pub label: String,
    pub lattice: Lattice,
}

/// Indecomposable lattices, grouped by ambient module.
#[derive(Clone, Debug)]
pub struct IndCatalog {
    pub entries: Vec<IndEntry>,
}

impl IndCatalog {
    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProjInj {
    pub projective: bool,
    /// None when the order carries no trace form.
    pub injective: Option<bool>,
}

/// Options for the class search.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Largest number of submodules of L / pi L explored per representative.
    pub move_cap: usize,
    /// Largest number of classes before giving up.
    pub class_cap: usize,
    /// Shuffle the moves (for order-independence checks).
    pub shuffle: Option<u64>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { move_cap: 1 << 14, class_cap: 512, shuffle: None }
    }
}

impl Order {
    fn unital_overrings(&self) -> impl Iterator<Item = &RealOverring> {
        self.overrings.iter().filter(|o| o.unital)
    }

    pub fn overring_names_unital(&self) -> Vec<String> {
        self.unital_overrings().map(|o| o.spec.name.clone()).collect()
    }

    /// The order description of a listed overring, when it has one.
    pub fn overring_spec(&self, name: &str) -> Option<OrderSpec> {
        self.overrings.iter().find(|o| o.spec.name == name).and_then(|o| o.spec.spec.clone())
    }

    pub fn over_invariant(&self, l: &Lattice) -> Vec<i64> {
        self.unital_overrings().map(|o| self.overring_index(o, l)).collect()
    }

    pub fn invariants(&self, l: &Lattice) -> Result<Invariants, OrderError> {
        Ok(Invariants { over: self.over_invariant(l), top: self.top_multiplicities(l)? })
    }

    /// Position of L among `classes`, or None when L is in none of them.
    /// Inconclusive searches are reported, never guessed.
    fn find_class(&self, classes: &[ClassInfo], l: &Lattice, inv: &Invariants) -> Result<Option<usize>, OrderError> {
        let mut undecided = false;
        for (i, c) in classes.iter().enumerate() {
            if c.inv != *inv {
                continue;
            }
            match self.is_isomorphic(&c.lattice, l)? {
                IsoOutcome::Iso { .. } => return Ok(Some(i)),
                IsoOutcome::NotIso => {}
                IsoOutcome::Undecided => undecided = true,
            }
        }
        if undecided {
            return Err(OrderError::Undecided("witness search exhausted its budget".into()));
        }
        Ok(None)
    }

    /// Class of L in a complete catalog. Invariants are computed in stages
    /// and a unique match ends the search, since every lattice lies in
    /// exactly one class.
    pub fn classify(&self, cat: &IsoCatalog, l: &Lattice) -> Result<usize, OrderError> {
        if l.amb.v != cat.v {
            return Err(OrderError::UnsupportedModule("lattice lies in a different module".into()));
        }
        let over = self.over_invariant(l);
        let mut cand: Vec<usize> = (0..cat.len()).filter(|&i| cat.classes[i].inv.over == over).collect();
        if cand.len() > 1 {
            let top = self.top_multiplicities(l)?;
            cand.retain(|&i| cat.classes[i].inv.top == top);
        }
        match cand.len() {
            0 => Err(OrderError::InvalidSpec("lattice matches no class of a complete catalog".into())),
            1 => Ok(cand[0]),
            _ => {
                let mut open = Vec::new();
                for &i in &cand {
                    match self.is_isomorphic(&cat.classes[i].lattice, l)? {
                        IsoOutcome::Iso { .. } => return Ok(i),
                        IsoOutcome::NotIso => {}
                        IsoOutcome::Undecided => open.push(i),
                    }
                }
                if open.len() == 1 {
                    // all other candidates were ruled out
                    Ok(open[0])
                } else {
                    Err(OrderError::Undecided(format!("{} candidate classes remain", open.len())))
                }
            }
        }
    }

    /// The catalog of classes in V, built once and cached.
    pub fn iso_catalog(&self, v: &AModule) -> Result<Arc<IsoCatalog>, OrderError> {
        if let Some(c) = self.catalogs.lock().unwrap().get(v) {
            return Ok(c.clone());
        }
        let cat = Arc::new(self.enumerate_classes(v, self.enum_opts)?);
        Ok(self.catalogs.lock().unwrap().entry(v.clone()).or_insert(cat).clone())
    }

    /// Breadth-first search over lattice classes under the moves
    /// {M : pi L < M < L}, starting at the standard lattice.
    pub fn enumerate_classes(&self, v: &AModule, opts: EnumOptions) -> Result<IsoCatalog, OrderError> {
        let start = self.standard_lattice(v)?;
        let mut classes: Vec<ClassInfo> = Vec::new();
        let inv = self.invariants(&start)?;
        classes.push(ClassInfo { label: String::new(), lattice: start, inv, parts: vec![], indecomposable: true });
        let mut rng = opts.shuffle.map(ChaCha8Rng::seed_from_u64);
        let mut head = 0;
        while head < classes.len() {
            let l = classes[head].lattice.clone();
            head += 1;
            let m = self.residue_module(&l)?;
            let mut subs = submodules(&self.alg, &m, opts.move_cap)?;
            if let Some(r) = rng.as_mut() {
                subs.shuffle(r);
            }
            for s in subs {
                if s.is_empty() || s.len() == m.dim {
                    continue;
                }
                let cand = self.normalize(self.lift_sub(&l, &s)?);
                let inv = self.invariants(&cand)?;
                if self.find_class(&classes, &cand, &inv)?.is_none() {
                    if classes.len() >= opts.class_cap {
                        return Err(OrderError::BudgetExceeded(format!("more than {} classes", opts.class_cap)));
                    }
                    classes.push(ClassInfo {
                        label: String::new(),
                        lattice: cand,
                        inv,
                        parts: vec![],
                        indecomposable: true,
                    });
                }
            }
        }
        // canonical order: larger overring indices first
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&classes[a].inv, &classes[b].inv);
            y.over.cmp(&x.over).then(y.top.cmp(&x.top)).then(a.cmp(&b))
        });
        let mut classes: Vec<ClassInfo> = order.into_iter().map(|i| classes[i].clone()).collect();
        let mut cat = IsoCatalog { v: v.clone(), classes: vec![] };
        self.mark_decomposables(v, &mut classes)?;
        cat.classes = classes;
        self.assign_labels(&mut cat)?;
        Ok(cat)
    }

    /// Every class hit by X + Y (X indecomposable in a proper piece) is decomposable.
    fn mark_decomposables(&self, v: &AModule, classes: &mut [ClassInfo]) -> Result<(), OrderError> {
        let tmp = IsoCatalog { v: v.clone(), classes: classes.to_vec() };
        let mut parts: Vec<Option<Vec<IndRef>>> = vec![None; classes.len()];
        for v1 in v.sub_modules() {
            if v1 == *v {
                continue;
            }
            let v2 = v.sub(&v1).unwrap();
            let c1 = self.iso_catalog(&v1)?;
            let c2 = self.iso_catalog(&v2)?;
            for (i, x) in c1.classes.iter().enumerate() {
                if !x.indecomposable {
                    continue;
                }
                for y in &c2.classes {
                    let s = self.direct_sum(&x.lattice, &y.lattice)?;
                    let k = self.classify(&tmp, &s)?;
                    if parts[k].is_none() {
                        let mut ps = vec![IndRef { v: v1.clone(), idx: i }];
                        ps.extend(y.parts.iter().cloned());
                        parts[k] = Some(ps);
                    }
                }
            }
        }
        for (k, c) in classes.iter_mut().enumerate() {
            match parts[k].take() {
                Some(ps) => {
                    c.indecomposable = false;
                    c.parts = ps;
                }
                None => {
                    c.indecomposable = true;
                    c.parts = vec![IndRef { v: v.clone(), idx: k }];
                }
            }
        }
        Ok(())
    }

    fn part_label(&self, cat: &IsoCatalog, r: &IndRef) -> Result<String, OrderError> {
        if r.v == cat.v {
            return Ok(cat.classes[r.idx].label.clone());
        }
        Ok(self.iso_catalog(&r.v)?.classes[r.idx].label.clone())
    }

    fn overring_position(&self, name: &str) -> Option<usize> {
        self.unital_overrings().position(|o| o.spec.name == name)
    }

    fn assign_labels(&self, cat: &mut IsoCatalog) -> Result<(), OrderError> {
        let v = cat.v.clone();
        let lam0 = self.overring_position("Λ_0");
        let index_label = |inv: &Invariants| format!("Λ_{}", lam0.map_or(0, |i| inv.over[i]));
        for k in 0..cat.len() {
            if !cat.classes[k].indecomposable {
                continue;
            }
            let inv = &cat.classes[k].inv;
            cat.classes[k].label = match &self.spec {
                OrderSpec::Congruence { .. } if v.0 == [1, 1] => index_label(inv),
                OrderSpec::Congruence { .. } if v.0 == [1, 0] => "R×0".into(),
                OrderSpec::Congruence { .. } if v.0 == [0, 1] => "0×R".into(),
                OrderSpec::Cusp { .. } if v.0 == [1] => index_label(inv),
                _ => format!("L{k}"),
            };
        }
        if let OrderSpec::Tiled { n, .. } = &self.spec {
            if v.0 == [1] {
                for i in 0..*n {
                    let col = self.column_lattice(i)?;
                    let k = self.classify(cat, &col)?;
                    cat.classes[k].label = format!("P_{}", i + 1);
                }
            }
        }
        for k in 0..cat.len() {
            if cat.classes[k].indecomposable {
                continue;
            }
            cat.classes[k].label = if matches!(self.spec, OrderSpec::Congruence { .. }) && v.0 == [1, 1] {
                "Λ_0".into()
            } else {
                let parts = cat.classes[k].parts.clone();
                parts.iter().map(|r| self.part_label(cat, r)).collect::<Result<Vec<_>, _>>()?.join("⊕")
            };
        }
        Ok(())
    }

    /// Lambda e_i inside the column space of a tiled order.
    pub fn column_lattice(&self, i: usize) -> Result<Lattice, OrderError> {
        let v = AModule(vec![1]);
        let amb = self.ambient(&v);
        if i >= amb.n {
            return Err(OrderError::UnsupportedModule(format!("no column {}", i + 1)));
        }
        let mut e = vec![0u64; amb.n];
        e[i] = 1;
        let gens: Vec<Vec<u64>> = amb.act.iter().map(|g| crate::exactarith::vec_mat(&self.ring, &e, g)).collect();
        let l = self.lattice_from_gens(&amb, &gens, 0)?;
        Ok(self.normalize(l))
    }

    /// All V with 0 < l_j(V) <= bound_j, by descending size.
    pub fn ind_modules(&self, bound: Option<&AModule>) -> Vec<AModule> {
        let top = bound.cloned().unwrap_or_else(|| self.regular_module());
        let mut vs = top.sub_modules();
        let dims: Vec<usize> = self.pres.simples.iter().map(|s| s.dim).collect();
        let size = |v: &AModule| v.0.iter().zip(&dims).map(|(a, d)| a * d).sum::<usize>();
        vs.sort_by(|a, b| size(b).cmp(&size(a)).then(b.cmp(a)));
        vs
    }

    /// Indecomposable lattices in the modules with multiplicities up to
    /// `bound` (default: those of A).
    pub fn ind_lattices(&self, bound: Option<&AModule>) -> Result<IndCatalog, OrderError> {
        let mut entries = Vec::new();
        for v in self.ind_modules(bound) {
            let cat = self.iso_catalog(&v)?;
            for (idx, c) in cat.classes.iter().enumerate() {
                if c.indecomposable {
                    entries.push(IndEntry {
                        at: IndRef { v: v.clone(), idx },
                        label: c.label.clone(),
                        lattice: c.lattice.clone(),
                    });
                }
            }
        }
        Ok(IndCatalog { entries })
    }

    /// Entries of ind(lat Lambda) that are lattices over the overring `over`.
    pub fn overring_restriction(&self, over: &OrderSpec, bound: Option<&AModule>) -> Result<IndCatalog, OrderError> {
        let os = self.spec.overring_from(over)?;
        let ro = RealOverring {
            basis: os.basis.iter().map(|b| b.iter().map(|m| realize_pmat(&self.ring, m)).collect()).collect(),
            one: os.one.iter().map(|m| realize_pmat(&self.ring, m)).collect(),
            unital: true,
            spec: os,
        };
        let all = self.ind_lattices(bound)?;
        Ok(IndCatalog { entries: all.entries.into_iter().filter(|e| self.carries_overring(&ro, &e.lattice)).collect() })
    }

    /// Restriction to one of the overrings listed in the presentation.
    pub fn listed_overring_restriction(&self, name: &str, bound: Option<&AModule>) -> Result<IndCatalog, OrderError> {
        let ro = self
            .overrings
            .iter()
            .find(|o| o.spec.name == name)
            .ok_or_else(|| OrderError::NotAnOverring(format!("no listed overring {name}")))?;
        let all = self.ind_lattices(bound)?;
        Ok(IndCatalog { entries: all.entries.into_iter().filter(|e| self.carries_overring(ro, &e.lattice)).collect() })
    }

    /// Whether X is a summand of `target` (X indecomposable): some composite
    /// X -> target -> X is an automorphism.
    fn is_summand_of(&self, x: &Lattice, target: &Lattice) -> Result<bool, OrderError> {
        let f = self.hom(x, target)?;
        let g = self.hom(target, x)?;
        for yf in &f.maps {
            for yg in &g.maps {
                let y = crate::exactarith::mat_mul(&self.ring, yf, yg);
                if self.is_onto(x, x, f.scale + g.scale, &y)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    pub fn proj_inj_flags(&self, x: &Lattice) -> Result<ProjInj, OrderError> {
        let reg = self.regular_lattice()?;
        let projective = self.is_summand_of(x, &reg)?;
        let injective = match self.dual_regular_lattice()? {
            Some(d) => Some(self.is_summand_of(x, &d)?),
            None => None,
        };
        Ok(ProjInj { projective, injective })
    }
}
