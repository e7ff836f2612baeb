use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use ordzeta_cli::config::{ChainKind, ConfigError, Emit, RunConfig, StartModule};
use ordzeta_cli::run::run;

#[derive(Parser)]
#[command(name = "ordzeta", version, about = "Zeta functions of orders, Hall polynomials and rejective chains")]
struct Cli {
    /// JSON config file; flags override its top-level keys
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true, value_parser = ["mixed", "equal"])]
    flavor: Option<String>,
    /// working precision m, at least truncation + 4
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// number D of series coefficients
    #[arg(long, global = true)]
    truncation: Option<usize>,
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads, 0 for one per core
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct OrderV {
    /// congruence:N, cusp:N, triangular:N, full:N, tiled:[[..]] or JSON
    #[arg(long)]
    order: String,
    /// multiplicities of the simple modules, e.g. 1,1; the regular module if absent
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<usize>>,
}

#[derive(Args)]
struct Triple {
    /// multipartition, vertices separated by '|', e.g. 2,1|1
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    nu: String,
    #[arg(long)]
    mu: String,
}

#[derive(Subcommand)]
enum Command {
    /// zeta matrix, determinant, product formula and inverse
    Zeta {
        #[command(flatten)]
        ov: OrderV,
        #[arg(long)]
        functional_equation: bool,
    },
    #[command(subcommand)]
    Hall(HallCmd),
    #[command(subcommand)]
    Qha(QhaCmd),
    /// indecomposable lattices, classes and overring restrictions
    Catalog {
        #[command(flatten)]
        ov: OrderV,
    },
    /// run the acceptance criteria
    VerifyAll {
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum HallCmd {
    Number {
        #[command(flatten)]
        t: Triple,
        #[arg(long)]
        q: Option<usize>,
    },
    Polynomial {
        #[command(flatten)]
        t: Triple,
    },
    Module {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        lambda: String,
    },
    LieCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    Prop51 {
        #[command(flatten)]
        ov: OrderV,
    },
}

#[derive(Subcommand)]
enum QhaCmd {
    Chain {
        /// truncated-poly:K, upper-triangular:N, matrix:N, cyclic-group:N
        #[arg(long, conflicts_with = "order")]
        algebra: Option<String>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t)]
        kind: ChainKind,
        #[arg(long, value_enum, default_value_t)]
        module: StartModule,
    },
    Heredity {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value_t)]
        kind: ChainKind,
        #[arg(long, value_enum, default_value_t)]
        module: StartModule,
    },
    Repdim {
        #[arg(long)]
        algebra: String,
    },
    Auslander {
        #[arg(long)]
        algebra: String,
    },
}

fn put(m: &mut Map<String, Value>, key: &str, v: Option<Value>) {
    if let Some(v) = v {
        m.insert(key.into(), v);
    }
}

fn task_of(c: Command) -> Value {
    match c {
        Command::Zeta { ov, functional_equation } => {
            json!({ "task": "zeta", "order": ov.order, "v": ov.v, "functional_equation": functional_equation })
        }
        Command::Catalog { ov } => json!({ "task": "catalog", "order": ov.order, "v": ov.v }),
        Command::VerifyAll { only } => json!({ "task": "verify-all", "only": only }),
        Command::Hall(h) => match h {
            HallCmd::Number { t, q } => {
                json!({ "task": "hall", "mode": "number", "lambda": t.lambda, "nu": t.nu, "mu": t.mu, "q": q })
            }
            HallCmd::Polynomial { t } => {
                json!({ "task": "hall", "mode": "polynomial", "lambda": t.lambda, "nu": t.nu, "mu": t.mu })
            }
            HallCmd::Module { n, m, lambda } => {
                json!({ "task": "hall", "mode": "module", "n": n, "m": m, "lambda": lambda })
            }
            HallCmd::LieCheck { n, m } => json!({ "task": "hall", "mode": "lie-check", "n": n, "m": m }),
            HallCmd::Prop51 { ov } => json!({ "task": "hall", "mode": "prop51", "order": ov.order, "v": ov.v }),
        },
        Command::Qha(q) => match q {
            QhaCmd::Chain { algebra, order, v, kind, module } => json!({
                "task": "qha", "mode": "chain", "algebra": algebra, "order": order, "v": v,
                "kind": kind, "module": module,
            }),
            QhaCmd::Heredity { algebra, kind, module } => {
                json!({ "task": "qha", "mode": "heredity", "algebra": algebra, "kind": kind, "module": module })
            }
            QhaCmd::Repdim { algebra } => json!({ "task": "qha", "mode": "repdim", "algebra": algebra }),
            QhaCmd::Auslander { algebra } => json!({ "task": "qha", "mode": "auslander", "algebra": algebra }),
        },
    }
}

/// Drops null fields so that absent flags fall back to the defaults.
fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.into_iter().filter(|(_, x)| !x.is_null()).collect()),
        other => other,
    }
}

fn config_error(e: &ConfigError) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(e).expect("errors serialize"));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut doc = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str::<Value>(&text) {
                Ok(v) => v,
                Err(e) => return config_error(&ConfigError::at("", format!("{path}: {e}"))),
            },
            Err(e) => return config_error(&ConfigError::at("", format!("{path}: {e}"))),
        },
        None => json!({}),
    };
    let Some(top) = doc.as_object_mut() else {
        return config_error(&ConfigError::at("", "the config must be a JSON object"));
    };
    put(top, "prime", cli.prime.map(Value::from));
    put(top, "flavor", cli.flavor.map(Value::from));
    put(top, "precision", cli.precision.map(Value::from));
    put(top, "truncation", cli.truncation.map(Value::from));
    put(top, "emit", cli.emit.map(|e| json!(e)));
    put(top, "seed", cli.seed.map(Value::from));
    put(top, "workers", cli.workers.map(Value::from));
    if let Some(c) = cli.command {
        top.insert("tasks".into(), json!([strip_nulls(task_of(c))]));
    }
    let cfg = match RunConfig::from_json(&doc.to_string()) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    if cfg.workers > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    }

    let start = Instant::now();
    let report = run(&cfg);
    eprintln!("finished {} tasks in {:.2?}", report.tasks.len(), start.elapsed());

    let json = report.to_json();
    let table = report.to_table();
    match cfg.emit {
        Emit::Json => print!("{json}"),
        Emit::Table => print!("{table}"),
        Emit::Both => {
            print!("{json}");
            eprint!("{table}");
        }
    }
    for (path, body) in [(&cfg.output.json, &json), (&cfg.output.table, &table)] {
        if let Some(path) = path {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::from(report.exit_code as u8)
}
