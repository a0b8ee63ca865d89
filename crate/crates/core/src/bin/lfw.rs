use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lfw::cli::ast::{Directive, Document, Item};
use lfw::cli::{self, RunOptions};
use lfw::clopen::ClopenSet;
use lfw::construct::{self, solve_complement, SolveLimits, SolveRequest};
use lfw::framesim::{self, FiniteModel};
use lfw::gfq::FieldConfig;
use lfw::LfwError;

#[derive(Parser)]
#[command(name = "lfw", version, about = "Wavelet sets and frames over local fields of positive characteristic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every directive in a spec file.
    Check {
        spec: PathBuf,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Seed for randomized trials that do not name one.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run only the definitions and `bound` directives of a spec file.
    Bound {
        spec: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a built-in family as canonical JSON.
    Construct {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        c: u32,
        /// Low-to-high coefficients of a monic modulus, comma separated.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        #[arg(long)]
        m: Option<i32>,
        #[arg(long)]
        n: Option<i32>,
        /// For ex46: the family as printed, including its last set.
        #[arg(long, conflicts_with = "corrected")]
        printed: bool,
        /// For ex46: the existing sets and the corrected target (default).
        #[arg(long)]
        corrected: bool,
    },
    /// Complete a family by exact cover.
    Solve {
        /// Spec file defining the existing sets.
        #[arg(long)]
        existing: PathBuf,
        /// Name of the set or family in the spec.
        #[arg(long, default_value = "existing")]
        family: String,
        /// Valuation range of candidate cells, `a..b`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        shells: (i32, i32),
        #[arg(long)]
        max_scale: i32,
        /// Time cap in seconds.
        #[arg(long, default_value_t = 60)]
        time: u64,
        #[arg(long)]
        parallel: bool,
    },
    /// Exact finite-model Parseval and Gram computations.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        /// Window `R,S`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        window: (i32, i32),
        /// Spec file defining the family.
        #[arg(long)]
        family: PathBuf,
        /// Name of the family in the spec.
        #[arg(long, default_value = "psi")]
        name: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First index `j,k` of a Gram entry.
        #[arg(long, value_parser = parse_pair, default_value = "0,0", allow_hyphen_values = true)]
        at: (i32, i32),
        /// Second index `j,k` of a Gram entry.
        #[arg(long, value_parser = parse_pair, default_value = "0,0", allow_hyphen_values = true)]
        with: (i32, i32),
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Shannon,
    Annulus,
    ScaledShannon,
    Super47,
    Ex46,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimKind {
    Parseval,
    SuperParseval,
    Gram,
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_pair(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated integers")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<LfwError> for Failure {
    fn from(e: LfwError) -> Self {
        match e {
            LfwError::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    cli::parse_spec(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn emit_json(target: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    if target == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(target, text)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", target.display())))
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn report(doc: &Document, seed: Option<u64>, json_out: Option<&Path>) -> Result<u8, Failure> {
    let r = cli::run(doc, &RunOptions { seed })?;
    if json_out != Some(Path::new("-")) {
        print!("{}", r.to_text());
    }
    if let Some(path) = json_out {
        emit_json(path, &r.to_json())?;
    }
    Ok(r.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Check { spec, json, seed } => report(&load(&spec)?, seed, json.as_deref()),
        Cmd::Bound { spec, json } => {
            let mut doc = load(&spec)?;
            doc.items.retain(|it| match it {
                Item::Directive(d) => matches!(
                    d.kind,
                    Directive::Bound(..) | Directive::Construct { .. } | Directive::ScalingSet { .. }
                ),
                _ => true,
            });
            report(&doc, None, json.as_deref())
        }
        Cmd::Construct {
            family,
            p,
            c,
            modulus,
            m,
            n,
            printed,
            corrected: _,
        } => {
            let f = FieldConfig::new(p, c, modulus)?;
            let need = |x: Option<i32>, flag: &str| {
                x.ok_or_else(|| Failure::Usage(format!("this family needs --{flag}")))
            };
            let sets = |v: &[ClopenSet]| Value::Array(v.iter().map(ClopenSet::to_json).collect());
            let out = match family {
                Family::Shannon => sets(&construct::shannon_multiwavelet(&f)),
                Family::Annulus => construct::annulus_wavelet(&f, need(m, "m")?)?.to_json(),
                Family::ScaledShannon => sets(&construct::scaled_shannon(&f, need(m, "m")?)?),
                Family::Super47 => sets(&construct::super_47(&f, need(n, "n")?)?),
                Family::Ex46 => {
                    let n = need(n, "n")?;
                    if printed {
                        sets(&construct::ex46_printed(&f, n)?)
                    } else {
                        json!({
                            "existing": sets(&construct::ex46_existing(&f, n)?),
                            "target": construct::ex46_corrected_target(&f, n).to_json(),
                        })
                    }
                }
            };
            print_json(&out);
            Ok(0)
        }
        Cmd::Solve {
            existing,
            family,
            shells,
            max_scale,
            time,
            parallel,
        } => {
            let doc = load(&existing)?;
            let (field, sets) = cli::named_sets(&doc, &family, &RunOptions::default())?;
            let req = SolveRequest {
                field,
                existing: sets,
                shells,
                max_scale,
            };
            let limits = SolveLimits {
                time: Duration::from_secs(time),
                parallel,
                ..SolveLimits::default()
            };
            let out = solve_complement(&req, &limits)?;
            print_json(&out.to_json());
            Ok(if out.set().is_some() { 0 } else { 1 })
        }
        Cmd::Simulate {
            kind,
            window,
            family,
            name,
            trials,
            seed,
            at,
            with,
        } => {
            let doc = load(&family)?;
            let (_, fns) = cli::named_functions(&doc, &name, &RunOptions::default())?;
            let model = FiniteModel::new(window.0, window.1)?;
            match kind {
                SimKind::Gram => {
                    let idx = |(j, k): (i32, i32)| -> Result<(i32, u64), Failure> {
                        let k = u64::try_from(k)
                            .map_err(|_| Failure::Usage("translate index must be non-negative".into()))?;
                        Ok((j, k))
                    };
                    let v = framesim::gram_entry(&model, &fns, idx(at)?, idx(with)?)?;
                    print_json(&json!({ "value": v.to_string(), "zero": v.is_zero() }));
                    Ok(0)
                }
                SimKind::Parseval | SimKind::SuperParseval => {
                    let r = if matches!(kind, SimKind::Parseval) {
                        framesim::parseval_trials(&model, &fns, trials, seed)?
                    } else {
                        framesim::super_parseval_trials(&model, &fns, trials, seed)?
                    };
                    print_json(&json!({
                        "deltas": r.deltas,
                        "random": r.random,
                        "seed": seed,
                        "spot_checks": r.spot_checks,
                        "all_zero": r.all_zero,
                        "first_failure": r.first_failure,
                    }));
                    Ok(if r.all_zero { 0 } else { 1 })
                }
            }
        }
    }
}
