use serde::Serialize;
use serde_json::{json, Value};

use ordzeta::exactarith::ChainRing;
use ordzeta::finmod::FinModule;
use ordzeta::hall::*;
use ordzeta::orders::{AModule, Order, OrderSpec};
use ordzeta::qha::*;
use ordzeta::zeta::*;

use crate::config::*;
use crate::report::{Report, TaskReport};
use crate::status::{check, check_with, Check, TaskError};
use crate::verify::{verify_all, VerifyOptions};

type TaskOut = Result<(String, Vec<Check>, Value), TaskError>;

struct Done {
    label: String,
    checks: Vec<Check>,
    result: Value,
    error: Option<TaskError>,
}

impl From<(String, Vec<Check>, Value)> for Done {
    fn from((label, checks, result): (String, Vec<Check>, Value)) -> Self {
        Done { label, checks, result, error: None }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

struct Runner<'a> {
    cfg: &'a RunConfig,
}

impl Runner<'_> {
    fn order(&self, spec: &OrderSpec) -> Result<Order, TaskError> {
        let ring = ChainRing::new(self.cfg.prime, self.cfg.precision(), self.cfg.flavor)?;
        Ok(Order::new(spec, ring, self.cfg.budget())?.with_enum_options(self.cfg.enum_options()))
    }

    fn module(&self, order: &Order, v: &Option<Vec<usize>>) -> Result<AModule, TaskError> {
        let v = module_or_regular(v, order.regular_module());
        if v.0.len() != order.r() {
            return Err(TaskError::input(format!(
                "V has {} multiplicities but A has {} simple modules",
                v.0.len(),
                order.r()
            )));
        }
        Ok(v)
    }

    fn zeta(&self, t: &ZetaTask) -> TaskOut {
        let d = self.cfg.truncation;
        let o = self.order(&t.order.0)?;
        let v = self.module(&o, &t.v)?;
        let zm = zeta_matrix(&o, &v, d)?;
        let det = det_zeta(&zm, None)?;
        let solomon = verify_solomon2(&o, &v, d)?;
        let inverse = verify_inverse_polynomial(&zm)?;
        let mut checks = vec![
            check("product formula equals the determinant", solomon.verdict),
            check("inverse has entries in Z[T]", inverse.polynomial),
        ];
        let fe = if t.functional_equation {
            let r = functional_equation_check(&o, d)?;
            checks.push(check("functional equation", r.verdict));
            Some(r)
        } else {
            None
        };
        let label = format!("{} V={:?}", t.order.0.name(), v.0);
        let result = json!({
            "order": t.order,
            "v": v.0,
            "matrix": zm.to_json(),
            "det": det.to_json(),
            "solomon": solomon,
            "inverse": inverse.inverse,
            "functional_equation": fe,
        });
        Ok((label, checks, result))
    }

    fn hall(&self, t: &HallTask) -> TaskOut {
        match t {
            HallTask::Number { lambda, nu, mu, q } => {
                let q = q.unwrap_or(self.cfg.prime as usize);
                let f = Gf::new(q)?;
                let count = hall_number(&f, &lambda.0, &nu.0, &mu.0)?;
                let label = format!("number F^{}_{{{} {}}} at q={q}", mu.0, lambda.0, nu.0);
                Ok((label, vec![], json!({ "q": q, "count": count })))
            }
            HallTask::Polynomial { lambda, nu, mu } => {
                let poly = hall_polynomial(&lambda.0, &nu.0, &mu.0)?;
                let f = Gf::new(HELD_OUT)?;
                let fresh = hall_number(&f, &lambda.0, &nu.0, &mu.0)? as i64;
                let at = zpoly_eval(&poly, HELD_OUT as i64);
                let label = format!("polynomial phi^{}_{{{} {}}}", mu.0, lambda.0, nu.0);
                let checks = vec![check_with(
                    format!("held-out q={HELD_OUT} matches a fresh count"),
                    at == fresh,
                    format!("{at} vs {fresh}"),
                )];
                Ok((
                    label,
                    checks,
                    json!({ "polynomial": poly, "held_out": { "q": HELD_OUT, "value": at, "count": fresh } }),
                ))
            }
            HallTask::Module { n, m, lambda } => {
                let a = generic_action(*n, *m, &lambda.0)?;
                Ok((format!("module n={n} m={m} u_{}", lambda.0), vec![], to_value(&a)))
            }
            HallTask::LieCheck { n, m } => {
                let r = lie_check(*n, *m)?;
                Ok((format!("lie-check n={n} m={m}"), vec![check("lie-check verdict", r.verdict)], to_value(&r)))
            }
            HallTask::Prop51 { order, v } => {
                let o = self.order(&order.0)?;
                let v = self.module(&o, v)?;
                let r = verify_prop51(&o, &v, self.cfg.truncation)?;
                let label = format!("prop51 {} V={:?}", order.0.name(), v.0);
                Ok((label, vec![check("u-action equals the zeta matrix", r.verdict)], to_value(&r)))
            }
        }
    }

    fn algebra_chain(
        &self,
        a: &AlgebraSpec,
        kind: ChainKind,
        module: StartModule,
    ) -> Result<(Cat, RejectiveChain, Option<Vec<usize>>), TaskError> {
        let alg = a.build(self.cfg.prime)?;
        let b = self.cfg.budget();
        Ok(match kind {
            ChainKind::RadicalLayers => {
                let (cat, ch) = radical_layer_chain(&alg, b)?;
                (cat, ch, None)
            }
            ChainKind::Iterated => {
                let reg = FinModule::regular(&alg);
                let m = match module {
                    StartModule::Regular => reg,
                    StartModule::RegularDual => FinModule::direct_sum(&[&reg, &dual_regular(&alg)]),
                };
                let (cat, ch, dims) = iterated_radical_chain(&alg, &m, "M", b)?;
                (cat, ch, Some(dims))
            }
        })
    }

    fn qha(&self, t: &QhaTask) -> TaskOut {
        let b = self.cfg.budget();
        let p = self.cfg.prime;
        match t {
            QhaTask::Chain { algebra: Some(a), kind, module, .. } => {
                let (_, ch, dims) = self.algebra_chain(a, *kind, *module)?;
                let checks = vec![check("rejective chain", ch.verdict)];
                Ok((format!("chain {}", a.name()), checks, json!({ "chain": ch, "layer_dims": dims })))
            }
            QhaTask::Chain { order: Some(spec), v, .. } => {
                let o = self.order(&spec.0)?;
                let v = self.module(&o, v)?;
                let chain = build_cv_chain(&o, &v)?;
                let mut checks: Vec<Check> = chain
                    .report
                    .steps
                    .iter()
                    .map(|s| check(format!("approximation of {} lies in the rest", s.removed), s.approx_in_subcat))
                    .collect();
                let mut blocks = Vec::new();
                for s in &chain.steps {
                    let r = verify_block_lemma(&o, s, &v, self.cfg.truncation)?;
                    checks.push(check(format!("block lemma removing {}", r.removed), r.verdict));
                    blocks.push(r);
                }
                let label = format!("chain {} V={:?}", spec.0.name(), v.0);
                Ok((label, checks, json!({ "chain": chain.report, "block_lemma": blocks })))
            }
            QhaTask::Chain { .. } => Err(TaskError::input("give exactly one of algebra and order")),
            QhaTask::Heredity { algebra, kind, module } => {
                let (cat, ch, _) = self.algebra_chain(algebra, *kind, *module)?;
                let h = heredity_chain(&cat, &ch.levels, 4 * ch.levels.len() + 4)?;
                let mut checks = vec![check("rejective chain", ch.verdict)];
                checks.extend(
                    h.steps.iter().enumerate().map(|(k, s)| check(format!("heredity ideal {}", k + 1), s.verdict)),
                );
                Ok((format!("heredity {}", algebra.name()), checks, json!({ "chain": ch, "heredity": h })))
            }
            QhaTask::Repdim { algebra } => {
                let r = rep_dim_upper(&algebra.build(p)?, b)?;
                let checks = vec![
                    check("rejective chain", r.chain_verdict),
                    check("heredity certificates", r.heredity.verdict),
                    check("gl.dim <= 2m - 2", r.within_2m_minus_2),
                ];
                Ok((format!("repdim {}", algebra.name()), checks, to_value(&r)))
            }
            QhaTask::Auslander { algebra } => {
                let r = auslander_check(&algebra.build(p)?, None, b)?;
                let checks =
                    vec![check("gl.dim <= 2", r.gl_dim_at_most_2), check("dom.dim >= 2", r.dom_dim_at_least_2)];
                Ok((format!("auslander {}", algebra.name()), checks, to_value(&r)))
            }
        }
    }

    fn catalog(&self, t: &CatalogTask) -> TaskOut {
        let o = self.order(&t.order.0)?;
        let v = self.module(&o, &t.v)?;
        let ind = o.ind_lattices(Some(&v))?;
        let classes = o.iso_catalog(&v)?;
        let mut flags = Vec::new();
        for e in &ind.entries {
            let f = o.proj_inj_flags(&e.lattice)?;
            flags.push(json!({ "label": e.label, "projective": f.projective, "injective": f.injective }));
        }
        let mut overrings = Vec::new();
        for name in o.overring_names() {
            let sub = o.listed_overring_restriction(&name, Some(&v))?;
            overrings.push(json!({ "overring": name, "ind": sub.labels() }));
        }
        let label = format!("{} V={:?}", t.order.0.name(), v.0);
        let result = json!({
            "order": t.order,
            "v": v.0,
            "ind": ind.labels(),
            "classes": classes.labels(),
            "flags": flags,
            "overrings": overrings,
        });
        Ok((label, vec![], result))
    }

    fn verify(&self, t: &VerifyTask) -> Result<Done, TaskError> {
        let opts = VerifyOptions {
            budget: self.cfg.budget(),
            enum_opts: self.cfg.enum_options(),
            mutation: None,
            only: t.only.clone(),
        };
        let results = verify_all(&opts, |r| eprintln!("{}", r.line()));
        let checks = results
            .iter()
            .map(|r| check_with(format!("criterion {}", r.id), r.status == crate::status::Status::Pass, r.title))
            .collect();
        // the worst criterion error, if any, becomes the task error
        let error = results.iter().filter_map(|r| r.error.clone()).max_by_key(|e| e.exit_code());
        Ok(Done { label: "verify-all".into(), checks, result: to_value(&results), error })
    }

    fn task(&self, t: &Task) -> Result<Done, TaskError> {
        match t {
            Task::Zeta(z) => self.zeta(z).map(Done::from),
            Task::Hall(h) => self.hall(h).map(Done::from),
            Task::Qha(q) => self.qha(q).map(Done::from),
            Task::Catalog(c) => self.catalog(c).map(Done::from),
            Task::VerifyAll(v) => self.verify(v),
        }
    }
}

/// Runs the tasks of a validated config in order.
pub fn run(cfg: &RunConfig) -> Report {
    let runner = Runner { cfg };
    let tasks = cfg
        .tasks
        .iter()
        .enumerate()
        .map(|(index, t)| match runner.task(t) {
            Ok(d) => TaskReport::new(index, t.kind(), d.label, d.checks, d.error, d.result),
            Err(e) => TaskReport::new(index, t.kind(), String::new(), vec![], Some(e), Value::Null),
        })
        .collect();
    Report::new(cfg.resolved(), tasks)
}
