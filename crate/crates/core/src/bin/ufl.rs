use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use unitary_fl::corpus::{self, CORPUS};
use unitary_fl::instance::{parse_instance, InstanceFile};
use unitary_fl::orbital::{self, EngineOptions, EnumeratorKind};
use unitary_fl::report;
use unitary_fl::{Result, UflError};

#[derive(Parser)]
#[command(name = "ufl", version, about = "Lattice-counting orbital integrals for unitary groups over F_q((t))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance file, or `corpus:NAME` for a bundled instance.
    file: String,
    /// Working precision in powers of t.
    #[arg(long)]
    precision: Option<i64>,
    /// Largest sub-quotient dimension the enumerator will search.
    #[arg(long)]
    enum_cap: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Numerical invariants of the datum.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Comma-separated factor ids (default: the partitioned factors, or all).
        #[arg(long)]
        ids: Option<String>,
    },
    /// Count self-dual lattices of one class.
    Orbital {
        #[command(flatten)]
        common: Common,
        /// Class as comma-separated bits, one per factor of the set.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        ids: Option<String>,
        /// Use the naive enumerator.
        #[arg(long)]
        naive: bool,
    },
    /// Check `O^kappa = (-1)^r q^r SO^H` for the instance partition.
    Flverify {
        #[command(flatten)]
        common: Common,
        /// Cross-check every count with the naive enumerator where it runs.
        #[arg(long)]
        oracle: bool,
    },
    /// Characteristic-map geometry and the intersection profile.
    Spectral {
        #[command(flatten)]
        common: Common,
    },
    /// The bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Run flverify on every bundled instance.
    Run {
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        oracle: bool,
    },
    /// List bundled instance names.
    List,
    /// Print a bundled instance file.
    Show { name: String },
}

enum Outcome {
    Ok(Value),
    Fail(Value),
}

fn load(spec: &str) -> Result<InstanceFile> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        return corpus::find(name)
            .map(|e| e.instance())
            .ok_or_else(|| UflError::Io(format!("no bundled instance named {name}")));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| UflError::Io(format!("{spec}: {e}")))?;
    parse_instance(&text)
}

fn options(inst: &InstanceFile, common: &Common, enumerator: EnumeratorKind) -> EngineOptions {
    let base = EngineOptions::default();
    EngineOptions { enum_cap: common.enum_cap.or(inst.options.enum_cap).unwrap_or(base.enum_cap), enumerator }
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| UflError::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn parse_ids(inst: &InstanceFile, ids: &Option<String>) -> Result<Vec<usize>> {
    match ids {
        None => inst.default_set(),
        Some(s) => {
            let list: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
            let mut set = inst.indices(&list, "--ids")?;
            set.sort_unstable();
            set.dedup();
            Ok(set)
        }
    }
}

fn parse_lambda(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|x| match x.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(UflError::ClassNotAdmissible(format!("{other:?} is not 0 or 1"))),
        })
        .collect()
}

fn flverify(inst: &InstanceFile, common: &Common, oracle: bool) -> Result<Outcome> {
    let datum = inst.datum(common.precision)?;
    let part = inst.partition()?;
    let opts = options(inst, common, EnumeratorKind::Pruned);
    let rep = in_pool(common.jobs.or(inst.options.jobs), || orbital::verify_fl(&datum, &part, &opts, oracle))??;
    let v = report::fl_value(inst, &rep);
    Ok(if rep.verdict() { Outcome::Ok(v) } else { Outcome::Fail(v) })
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Invariants { common, ids } => {
            let inst = load(&common.file)?;
            let datum = inst.datum(common.precision)?;
            let set = parse_ids(&inst, &ids)?;
            Ok(Outcome::Ok(report::invariants_value(&inst, &datum, &set)?))
        }
        Command::Orbital { common, lambda, ids, naive } => {
            let inst = load(&common.file)?;
            let datum = inst.datum(common.precision)?;
            let set = parse_ids(&inst, &ids)?;
            let lambda = parse_lambda(&lambda)?;
            if lambda.len() != set.len() {
                return Err(UflError::ClassNotAdmissible(format!(
                    "class has {} entries for {} factors",
                    lambda.len(),
                    set.len()
                )));
            }
            let kind = if naive { EnumeratorKind::Naive } else { EnumeratorKind::Pruned };
            let opts = options(&inst, &common, kind);
            let count = in_pool(common.jobs.or(inst.options.jobs), || orbital::orbital(&datum, &set, &lambda, &opts))??;
            Ok(Outcome::Ok(report::orbital_value(&inst, &set, &lambda, count, kind.name())))
        }
        Command::Flverify { common, oracle } => {
            let inst = load(&common.file)?;
            flverify(&inst, &common, oracle)
        }
        Command::Spectral { common } => {
            let inst = load(&common.file)?;
            let datum = inst.datum(common.precision)?;
            let part = inst.partition()?;
            Ok(Outcome::Ok(report::spectral_value(&inst, &datum, &part)?))
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => Ok(Outcome::Ok(json!({"instances": CORPUS.iter().map(|e| e.name).collect::<Vec<_>>()}))),
            CorpusAction::Show { name } => {
                let e = corpus::find(&name).ok_or_else(|| UflError::Io(format!("no bundled instance named {name}")))?;
                Ok(Outcome::Ok(e.instance().to_value()))
            }
            CorpusAction::Run { jobs, oracle } => {
                let mut lines = Vec::new();
                let mut results = serde_json::Map::new();
                let mut all_pass = true;
                for e in CORPUS {
                    let inst = e.instance();
                    let common = Common { file: e.name.to_string(), precision: None, enum_cap: None, jobs };
                    let (verdict, v) = match flverify(&inst, &common, oracle) {
                        Ok(Outcome::Ok(v)) => ("PASS", v),
                        Ok(Outcome::Fail(v)) => ("FAIL", v),
                        Err(err) => ("ERROR", report::error_value(&err)),
                    };
                    all_pass &= verdict == "PASS";
                    let detail = match verdict {
                        "ERROR" => v["error"]["message"].as_str().unwrap_or_default().to_string(),
                        _ => format!(
                            "O_kappa={} transfer={} SO_H={}",
                            v["O_kappa"].as_str().unwrap_or_default(),
                            v["transfer"].as_str().unwrap_or_default(),
                            v["SO_H"].as_str().unwrap_or_default()
                        ),
                    };
                    lines.push(format!("{} {verdict} {detail}", e.name));
                    results.insert(e.name.to_string(), v);
                }
                let v = json!({"command": "corpus run", "lines": lines, "results": results, "all_pass": all_pass});
                Ok(if all_pass { Outcome::Ok(v) } else { Outcome::Fail(v) })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    eprintln!("ufl: finished in {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(Outcome::Ok(v)) => {
            print!("{}", report::canonical(&v));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(v)) => {
            print!("{}", report::canonical(&v));
            eprintln!("ufl: VERDICT FAIL");
            ExitCode::from(2)
        }
        Err(e) => {
            print!("{}", report::canonical(&report::error_value(&e)));
            eprintln!("ufl: error: {e}");
            ExitCode::from(1)
        }
    }
}
