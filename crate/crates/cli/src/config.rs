use std::fmt;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use ordzeta::exactarith::Flavor;
use ordzeta::finmod::{Budget, FinAlgebra, FinError};
use ordzeta::hall::MultiPartition;
use ordzeta::orders::{AModule, EnumOptions, OrderSpec};

/// Schema violation, located by a JSON pointer into the config document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigError {
    pub error: &'static str,
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { error: "ConfigInvalid", pointer: pointer.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfigInvalid at {:?}: {}", self.pointer, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    #[default]
    Json,
    Table,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    /// Submodules of L / pi L explored per class-search step.
    #[serde(default = "default_move_cap")]
    pub move_cap: usize,
    /// Largest number of lattice classes in one catalog.
    #[serde(default = "default_class_cap")]
    pub class_cap: usize,
    /// Witness searches below this size are exhaustive.
    #[serde(default = "default_exhaustive")]
    pub exhaustive: u64,
    /// Random witnesses tried above it.
    #[serde(default = "default_samples")]
    pub samples: u64,
}

fn default_move_cap() -> usize {
    EnumOptions::default().move_cap
}
fn default_class_cap() -> usize {
    EnumOptions::default().class_cap
}
fn default_exhaustive() -> u64 {
    Budget::default().exhaustive
}
fn default_samples() -> u64 {
    Budget::default().samples
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            move_cap: default_move_cap(),
            class_cap: default_class_cap(),
            exhaustive: default_exhaustive(),
            samples: default_samples(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Also write the JSON report here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    /// Also write the table rendering here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(default = "default_flavor")]
    pub flavor: Flavor,
    /// Working precision m of R / pi^m; defaults to truncation + 4.
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub seed: u64,
    /// 0 lets the thread pool decide.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub emit: Emit,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_prime() -> u64 {
    2
}
fn default_flavor() -> Flavor {
    Flavor::Mixed
}
fn default_truncation() -> usize {
    10
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime: default_prime(),
            flavor: default_flavor(),
            precision: None,
            truncation: default_truncation(),
            seed: 0,
            workers: 0,
            emit: Emit::default(),
            budget: BudgetConfig::default(),
            tasks: vec![],
            output: OutputConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum Task {
    Zeta(ZetaTask),
    Hall(HallTask),
    Qha(QhaTask),
    Catalog(CatalogTask),
    VerifyAll(VerifyTask),
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Zeta(_) => "zeta",
            Task::Hall(_) => "hall",
            Task::Qha(_) => "qha",
            Task::Catalog(_) => "catalog",
            Task::VerifyAll(_) => "verify-all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaTask {
    pub order: OrderArg,
    /// Multiplicities of the simple A-modules; the regular module if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<usize>>,
    #[serde(default)]
    pub functional_equation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HallTask {
    Number {
        lambda: PartitionArg,
        nu: PartitionArg,
        mu: PartitionArg,
        /// Field size; the configured prime if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<usize>,
    },
    Polynomial {
        lambda: PartitionArg,
        nu: PartitionArg,
        mu: PartitionArg,
    },
    Module {
        n: usize,
        m: usize,
        lambda: PartitionArg,
    },
    LieCheck {
        n: usize,
        m: usize,
    },
    Prop51 {
        order: OrderArg,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    /// C_n = add of the A / J^i with i <= m - n.
    #[default]
    RadicalLayers,
    /// M_{n+1} = M_n J_{End(M_n)}.
    Iterated,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StartModule {
    #[default]
    Regular,
    /// A + D(A)
    RegularDual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum QhaTask {
    /// An algebra chain (with `algebra`) or the lattice chain of an order
    /// (with `order`).
    Chain {
        #[serde(default, deserialize_with = "algebra_opt_de", skip_serializing_if = "Option::is_none")]
        algebra: Option<AlgebraSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<OrderArg>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<usize>>,
        #[serde(default)]
        kind: ChainKind,
        #[serde(default)]
        module: StartModule,
    },
    Heredity {
        #[serde(deserialize_with = "algebra_de")]
        algebra: AlgebraSpec,
        #[serde(default)]
        kind: ChainKind,
        #[serde(default)]
        module: StartModule,
    },
    Repdim {
        #[serde(deserialize_with = "algebra_de")]
        algebra: AlgebraSpec,
    },
    Auslander {
        #[serde(deserialize_with = "algebra_de")]
        algebra: AlgebraSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogTask {
    pub order: OrderArg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyTask {
    /// Criterion numbers to run; all of them if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub only: Option<Vec<usize>>,
}

/// Finite algebras over F_p available to the qha tasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// F_p[x] / x^k
    TruncatedPoly { k: usize },
    /// upper triangular n x n matrices
    UpperTriangular { n: usize },
    /// M_n(F_p)
    Matrix { n: usize },
    /// F_p[C_n]
    CyclicGroup { n: usize },
    /// e_i e_j = sum_k mult[i][j][k] e_k
    StructureConstants { mult: Vec<Vec<Vec<u64>>>, one: Vec<u64> },
    /// Path algebra modulo zero relations. Arrows are (source, target);
    /// paths are arrow lists in the order they are traversed.
    Quiver {
        vertices: usize,
        arrows: Vec<(usize, usize)>,
        #[serde(default)]
        zero_paths: Vec<Vec<usize>>,
        /// every path this long must vanish
        max_len: usize,
    },
}

impl AlgebraSpec {
    pub fn build(&self, p: u64) -> Result<FinAlgebra, FinError> {
        Ok(match self {
            AlgebraSpec::TruncatedPoly { k } => FinAlgebra::truncated_poly(p, *k),
            AlgebraSpec::UpperTriangular { n } => FinAlgebra::upper_triangular(p, *n),
            AlgebraSpec::Matrix { n } => FinAlgebra::matrix_algebra(p, *n),
            AlgebraSpec::CyclicGroup { n } => FinAlgebra::cyclic_group(p, *n),
            AlgebraSpec::StructureConstants { mult, one } => {
                let modp = |v: &Vec<u64>| v.iter().map(|x| x % p).collect::<Vec<_>>();
                let mult = mult.iter().map(|r| r.iter().map(modp).collect()).collect();
                FinAlgebra::new(p, mult, modp(one))?
            }
            AlgebraSpec::Quiver { vertices, arrows, zero_paths, max_len } => {
                FinAlgebra::path_algebra(p, *vertices, arrows, zero_paths, *max_len)?
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            AlgebraSpec::TruncatedPoly { k } => format!("truncated-poly:{k}"),
            AlgebraSpec::UpperTriangular { n } => format!("upper-triangular:{n}"),
            AlgebraSpec::Matrix { n } => format!("matrix:{n}"),
            AlgebraSpec::CyclicGroup { n } => format!("cyclic-group:{n}"),
            AlgebraSpec::StructureConstants { one, .. } => format!("structure-constants(dim {})", one.len()),
            AlgebraSpec::Quiver { vertices, arrows, .. } => {
                format!("quiver({vertices} vertices, {} arrows)", arrows.len())
            }
        }
    }

    fn check(&self) -> Result<(), (String, String)> {
        let size = match self {
            AlgebraSpec::TruncatedPoly { k } | AlgebraSpec::CyclicGroup { n: k } => *k,
            AlgebraSpec::UpperTriangular { n } | AlgebraSpec::Matrix { n } => *n,
            AlgebraSpec::StructureConstants { mult, one } => {
                let d = one.len();
                if mult.len() != d || mult.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d)) {
                    return Err(("/algebra/mult".into(), format!("expected a {d} x {d} x {d} table")));
                }
                d
            }
            AlgebraSpec::Quiver { vertices, arrows, zero_paths, .. } => {
                if let Some(k) = arrows.iter().position(|&(s, t)| s >= *vertices || t >= *vertices) {
                    return Err((format!("/algebra/arrows/{k}"), format!("vertices are 0..{vertices}")));
                }
                for (k, z) in zero_paths.iter().enumerate() {
                    if z.is_empty() || z.iter().any(|&a| a >= arrows.len()) {
                        return Err((
                            format!("/algebra/zero_paths/{k}"),
                            "a path is a nonempty list of arrow indices".into(),
                        ));
                    }
                }
                *vertices
            }
        };
        if size == 0 {
            return Err(("/algebra".into(), "the algebra must be nonzero".into()));
        }
        Ok(())
    }
}

fn parse_size(kind: &str, arg: &str) -> Result<usize, String> {
    arg.trim().parse::<usize>().map_err(|_| format!("{kind}: expected a size, got {arg:?}"))
}

/// `name:size` shorthand, e.g. `truncated-poly:3`.
pub fn parse_algebra(s: &str) -> Result<AlgebraSpec, String> {
    let (kind, arg) = s.split_once(':').ok_or_else(|| format!("expected kind:size, got {s:?}"))?;
    let n = parse_size(kind, arg)?;
    Ok(match kind {
        "truncated-poly" => AlgebraSpec::TruncatedPoly { k: n },
        "upper-triangular" => AlgebraSpec::UpperTriangular { n },
        "matrix" => AlgebraSpec::Matrix { n },
        "cyclic-group" => AlgebraSpec::CyclicGroup { n },
        _ => return Err(format!("unknown algebra {kind:?}")),
    })
}

/// `congruence:n`, `cusp:n`, `triangular:n`, `full:n`, `tiled:[[...]]`, or
/// the JSON form of an order spec.
pub fn parse_order(s: &str) -> Result<OrderSpec, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| e.to_string());
    }
    let (kind, arg) = s.split_once(':').ok_or_else(|| format!("expected kind:arg, got {s:?}"))?;
    let n = || parse_size(kind, arg);
    Ok(match kind {
        "congruence" => OrderSpec::Congruence { n: n()? as u32 },
        "cusp" => OrderSpec::Cusp { n: n()? as u32 },
        "triangular" => OrderSpec::triangular(n()?),
        "full" => OrderSpec::full_matrix(n()?),
        "tiled" => {
            let e: Vec<Vec<i64>> = serde_json::from_str(arg).map_err(|e| format!("tiled exponents: {e}"))?;
            OrderSpec::Tiled { n: e.len(), e }
        }
        _ => return Err(format!("unknown order {kind:?}")),
    })
}

/// Vertices separated by `|`, parts by `,`: `2,1|1` is ((2,1),(1)).
pub fn parse_partition(s: &str) -> Result<MultiPartition, String> {
    let mut out = Vec::new();
    for v in s.split('|') {
        let v = v.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for x in v.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            parts.push(x.parse::<usize>().map_err(|_| format!("bad part {x:?} in {s:?}"))?);
        }
        out.push(parts);
    }
    Ok(MultiPartition(out).normalized())
}

fn string_or<'de, D, T>(d: D, parse: fn(&str) -> Result<T, String>) -> Result<T, D::Error>
where
    D: Deserializer<'de>,
    T: DeserializeOwned,
{
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::String(s) => parse(&s).map_err(D::Error::custom),
        other => T::deserialize(other).map_err(D::Error::custom),
    }
}

/// An order spec given either in full or by shorthand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderArg(pub OrderSpec);

impl<'de> Deserialize<'de> for OrderArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        string_or(d, parse_order).map(OrderArg)
    }
}

impl Serialize for OrderArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionArg(pub MultiPartition);

impl<'de> Deserialize<'de> for PartitionArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        string_or(d, parse_partition).map(|m: MultiPartition| PartitionArg(m.normalized()))
    }
}

impl Serialize for PartitionArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn algebra_de<'de, D: Deserializer<'de>>(d: D) -> Result<AlgebraSpec, D::Error> {
    string_or(d, parse_algebra)
}

fn algebra_opt_de<'de, D: Deserializer<'de>>(d: D) -> Result<Option<AlgebraSpec>, D::Error> {
    string_or(d, parse_algebra).map(Some)
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        let token = match seg {
            Segment::Seq { index } => index.to_string(),
            Segment::Map { key } => key.replace('~', "~0").replace('/', "~1"),
            Segment::Enum { variant } => variant.clone(),
            Segment::Unknown => continue,
        };
        out.push('/');
        out.push_str(&token);
    }
    out
}

/// Tagged enums are buffered before they are parsed, which loses the path
/// below `/tasks/i`; recover the offending field by checking each one alone.
fn refine_pointer(text: &str, pointer: String, message: &str) -> String {
    let Some(i) = pointer.strip_prefix("/tasks/").and_then(|r| r.parse::<usize>().ok()) else {
        return pointer;
    };
    let doc: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(_) => return pointer,
    };
    let Some(task) = doc.pointer(&format!("/tasks/{i}")).and_then(|t| t.as_object()) else {
        return pointer;
    };
    let mut keys: Vec<&String> = task.keys().collect();
    keys.sort();
    for key in keys {
        if message.contains(&format!("unknown field `{key}`")) {
            return format!("{pointer}/{key}");
        }
        let v = task[key].clone();
        let bad = match key.as_str() {
            "order" => OrderArg::deserialize(v).is_err(),
            "algebra" => algebra_de(v).is_err(),
            "lambda" | "nu" | "mu" => PartitionArg::deserialize(v).is_err(),
            "v" | "only" => Option::<Vec<usize>>::deserialize(v).is_err(),
            "n" | "m" | "q" => usize::deserialize(v).is_err(),
            "functional_equation" => bool::deserialize(v).is_err(),
            "kind" if task.get("task").and_then(|t| t.as_str()) == Some("qha") => ChainKind::deserialize(v).is_err(),
            "module" => StartModule::deserialize(v).is_err(),
            _ => false,
        };
        if bad {
            return format!("{pointer}/{key}");
        }
    }
    pointer
}

impl RunConfig {
    /// Parses and validates a config document.
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = pointer_of(e.path());
            let message = e.into_inner().to_string();
            let pointer = refine_pointer(text, pointer, &message);
            ConfigError::at(pointer, message)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or(self.truncation as u32 + 4)
    }

    pub fn budget(&self) -> Budget {
        Budget { exhaustive: self.budget.exhaustive, samples: self.budget.samples, seed: self.seed }
    }

    pub fn enum_options(&self) -> EnumOptions {
        EnumOptions { move_cap: self.budget.move_cap, class_cap: self.budget.class_cap, shuffle: None }
    }

    /// Same as `precision = None`, filled in, for the report.
    pub fn resolved(&self) -> RunConfig {
        RunConfig { precision: Some(self.precision()), ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = self.prime;
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(ConfigError::at("/prime", format!("{p} is not a prime")));
        }
        let m = self.precision();
        if (m as usize) < self.truncation + 4 {
            return Err(ConfigError::at(
                "/precision",
                format!("precision {m} is below truncation + 4 = {}", self.truncation + 4),
            ));
        }
        let b = &self.budget;
        for (key, v) in [
            ("move_cap", b.move_cap as u64),
            ("class_cap", b.class_cap as u64),
            ("exhaustive", b.exhaustive),
            ("samples", b.samples),
        ] {
            if v == 0 {
                return Err(ConfigError::at(format!("/budget/{key}"), "budgets must be positive"));
            }
        }
        for (i, t) in self.tasks.iter().enumerate() {
            validate_task(t).map_err(|(rel, msg)| ConfigError::at(format!("/tasks/{i}{rel}"), msg))?;
        }
        Ok(())
    }
}

fn validate_v(v: &Option<Vec<usize>>) -> Result<(), (String, String)> {
    match v {
        Some(v) if v.is_empty() => Err(("/v".into(), "a module needs one multiplicity per simple".into())),
        _ => Ok(()),
    }
}

fn validate_task(t: &Task) -> Result<(), (String, String)> {
    let same_n = |parts: [(&str, &PartitionArg); 3]| -> Result<(), (String, String)> {
        let n = parts[0].1 .0.n();
        for (key, p) in parts {
            if p.0.n() != n || n == 0 {
                return Err((format!("/{key}"), format!("expected {n} vertices, got {}", p.0.n())));
            }
        }
        Ok(())
    };
    match t {
        Task::Zeta(z) => validate_v(&z.v),
        Task::Catalog(c) => validate_v(&c.v),
        Task::Hall(HallTask::Number { lambda, nu, mu, .. }) | Task::Hall(HallTask::Polynomial { lambda, nu, mu }) => {
            same_n([("lambda", lambda), ("nu", nu), ("mu", mu)])
        }
        Task::Hall(HallTask::Module { n, lambda, .. }) => {
            if *n == 0 || lambda.0.n() != *n {
                Err(("/lambda".into(), format!("expected {n} vertices, got {}", lambda.0.n())))
            } else {
                Ok(())
            }
        }
        Task::Hall(HallTask::LieCheck { n, .. }) if *n == 0 => Err(("/n".into(), "need at least one vertex".into())),
        Task::Hall(HallTask::Prop51 { v, .. }) => validate_v(v),
        Task::Qha(QhaTask::Chain { algebra, order, v, .. }) => {
            if algebra.is_some() == order.is_some() {
                return Err((String::new(), "give exactly one of algebra and order".into()));
            }
            if let Some(a) = algebra {
                a.check()?;
            }
            validate_v(v)
        }
        Task::Qha(QhaTask::Heredity { algebra, .. } | QhaTask::Repdim { algebra } | QhaTask::Auslander { algebra }) => {
            algebra.check()
        }
        Task::VerifyAll(VerifyTask { only: Some(ids) }) => match ids.iter().position(|&i| !(1..=15).contains(&i)) {
            Some(k) => Err((format!("/only/{k}"), "criteria are numbered 1 to 15".into())),
            None => Ok(()),
        },
        _ => Ok(()),
    }
}

/// The module V of a task, defaulting to the regular module.
pub fn module_or_regular(v: &Option<Vec<usize>>, regular: AModule) -> AModule {
    v.clone().map(AModule).unwrap_or(regular)
}
