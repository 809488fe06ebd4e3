use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use extremal_core::enumeration::{ForwardViolation, DEFAULT_MAX_VARIABLES};
use extremal_core::schema::{
    matrix_to_json, operator_from_json, parse_space_shorthand, space_from_json, space_to_json,
    vector_to_json, verdict_to_json,
};
use extremal_core::{
    audit_attainment, check_lp_property, decide_with, enumerate, AuditStatus, DecideOptions,
    EnumerationOptions, Error, LinearOperator, LpPropertyOptions, NormedSpace, Vector,
};

const EXIT_FAILS: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NORM: u8 = 3;
const EXIT_SIZE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "extremal",
    version,
    about = "Exact extreme-contraction tools for polyhedral normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact norm of a vector.
    Norm {
        /// `l1:n`, `linf:n`, `l2:n`, or a space JSON file.
        #[arg(long)]
        space: String,
        /// Comma-separated rationals, e.g. `1/2,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Evaluate through the vertex-representation gauge LP instead.
        #[arg(long)]
        vrep: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether an operator is an extreme contraction.
    Extreme {
        /// Operator JSON file.
        operator: String,
        /// Run every applicable method and require agreement.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all extreme contractions of a pair of polyhedral spaces.
    Enumerate {
        #[command(flatten)]
        pair: PairArgs,
        /// Print at most this many operators.
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_VARIABLES)]
        max_vars: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the Lindenstrauss–Perles property of a pair; exit 0 if it holds, 1 otherwise.
    LpProperty {
        #[command(flatten)]
        pair: PairArgs,
        /// Skip full enumeration and search only for backward violations.
        #[arg(long)]
        backward_only: bool,
        /// With --backward-only, also probe this many sampled operator-ball vertices.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        stop_at_first: bool,
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_VARIABLES)]
        max_vars: usize,
        #[arg(long)]
        json: bool,
    },
    /// Audit the span and extreme-image conditions on an extreme contraction.
    Audit {
        operator: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Domain and codomain: shorthand such as `l1:2` or space JSON files.
    #[arg(long, num_args = 2, value_names = ["DOMAIN", "CODOMAIN"], required = true)]
    pair: Vec<String>,
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: invalid JSON: {e}")))
}

fn load_space(arg: &str) -> Result<NormedSpace, Failure> {
    if Path::new(arg).is_file() {
        Ok(space_from_json(&read_json(arg)?)?)
    } else {
        Ok(parse_space_shorthand(arg)?)
    }
}

fn load_operator(path: &str) -> Result<LinearOperator, Failure> {
    Ok(operator_from_json(&read_json(path)?)?)
}

fn parse_vector(text: &str) -> Result<Vector, Failure> {
    text.split(',')
        .map(extremal_core::parse_rational)
        .collect::<Result<Vec<_>, _>>()
        .map(Vector::new)
        .map_err(Failure::Core)
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Norm {
            space,
            vector,
            vrep,
            json,
        } => {
            let space = load_space(&space)?;
            let x = parse_vector(&vector)?;
            let (value, squared) = if vrep {
                (space.gauge_norm_vrep(&x)?, false)
            } else {
                let n = space.norm(&x)?;
                (n.value, n.squared)
            };
            if json {
                print_json(&json!({"norm": value.to_string(), "squared": squared}));
            } else if squared {
                println!("{value} (squared)");
            } else {
                println!("{value}");
            }
            Ok(0)
        }
        Command::Extreme {
            operator,
            verify,
            json,
        } => {
            let t = load_operator(&operator)?;
            let v = decide_with(
                &t,
                DecideOptions {
                    cross_check: verify,
                },
            )?;
            if json {
                print_json(&verdict_to_json(&v));
                return Ok(0);
            }
            println!("{} ({})", v.decision, v.method);
            println!("operator norm: {}", v.evidence.operator_norm);
            let attaining: Vec<String> = v
                .evidence
                .attaining
                .iter()
                .map(|p| format!("±{p}"))
                .collect();
            println!("attained at: {}", attaining.join(" "));
            println!(
                "span rank: {} of {}",
                v.evidence.span_rank,
                t.domain().dim()
            );
            if !v.cross_checked.is_empty() {
                let names: Vec<&str> = v.cross_checked.iter().map(|m| m.as_str()).collect();
                println!("agrees with: {}", names.join(", "));
            }
            if let Some(d) = &v.witness {
                println!("witness D: {d}  (‖T ± D‖ <= 1)");
            }
            Ok(0)
        }
        Command::Enumerate {
            pair,
            limit,
            max_vars,
            json,
        } => {
            let x = load_space(&pair.pair[0])?;
            let y = load_space(&pair.pair[1])?;
            let set = enumerate(
                &x,
                &y,
                EnumerationOptions {
                    max_variables: max_vars,
                    cross_validate: true,
                },
            )?;
            if json {
                print_json(&json!({
                    "domain": space_to_json(&x),
                    "codomain": space_to_json(&y),
                    "method": set.method.as_str(),
                    "count": set.len(),
                    "operators": set.operators.iter().take(limit)
                        .map(|t| matrix_to_json(t.matrix())).collect::<Vec<_>>(),
                }));
                return Ok(0);
            }
            println!("{} extreme contractions", set.len());
            for t in set.operators.iter().take(limit) {
                println!("  {}", t.matrix());
            }
            if set.len() > limit {
                println!("  ... {} more", set.len() - limit);
            }
            Ok(0)
        }
        Command::LpProperty {
            pair,
            backward_only,
            samples,
            seed,
            stop_at_first,
            limit,
            max_vars,
            json,
        } => {
            let x = load_space(&pair.pair[0])?;
            let y = load_space(&pair.pair[1])?;
            let report = check_lp_property(
                &x,
                &y,
                LpPropertyOptions {
                    max_variables: max_vars,
                    backward_only,
                    stop_at_first,
                    forward_samples: samples,
                    seed,
                },
            )?;
            let forward_json = |f: &ForwardViolation| {
                json!({
                    "matrix": matrix_to_json(f.operator.matrix()),
                    "point": vector_to_json(&f.point),
                    "image": vector_to_json(&f.image),
                })
            };
            if json {
                print_json(&json!({
                    "domain": space_to_json(&x),
                    "codomain": space_to_json(&y),
                    "holds": report.holds,
                    "complete": report.complete,
                    "extreme_contractions": report.extreme_contractions,
                    "backward_candidates": report.backward_candidates,
                    "forward_violations": report.forward_violations.iter().take(limit)
                        .map(forward_json).collect::<Vec<_>>(),
                    "backward_violations": report.backward_violations.iter().take(limit)
                        .map(|b| json!({
                            "matrix": matrix_to_json(b.operator.matrix()),
                            "witness": b.verdict.witness.as_ref().map_or(Value::Null, matrix_to_json),
                        })).collect::<Vec<_>>(),
                    "notes": report.notes,
                }));
            } else {
                let status = if report.holds {
                    "holds"
                } else if report.fails() {
                    "fails"
                } else {
                    "inconclusive"
                };
                println!("L-P property for ({x}, {y}): {status}");
                for note in &report.notes {
                    println!("  {note}");
                }
                for f in report.forward_violations.iter().take(limit) {
                    println!(
                        "  extreme {} maps {} to non-extreme {}",
                        f.operator.matrix(),
                        f.point,
                        f.image
                    );
                }
                for b in report.backward_violations.iter().take(limit) {
                    let d = b
                        .verdict
                        .witness
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default();
                    println!(
                        "  {} preserves extreme points but is not extreme; witness D = {d}",
                        b.operator.matrix()
                    );
                }
            }
            Ok(if report.holds { 0 } else { EXIT_FAILS })
        }
        Command::Audit { operator, json } => {
            let t = load_operator(&operator)?;
            let v = decide_with(&t, DecideOptions::default())?;
            let report = audit_attainment(&t, &v)?;
            let status = |s: AuditStatus| match s {
                AuditStatus::Passed => "passed",
                AuditStatus::Failed => "failed",
                AuditStatus::NotApplicable => "not-applicable",
                AuditStatus::NotCovered => "not-covered",
            };
            if json {
                print_json(&json!({
                    "passed": report.passed(),
                    "checks": report.checks.iter().map(|c| json!({
                        "name": c.name, "status": status(c.status), "detail": c.detail,
                    })).collect::<Vec<_>>(),
                }));
            } else {
                for c in &report.checks {
                    println!("{}: {} ({})", c.name, status(c.status), c.detail);
                }
            }
            Ok(if report.passed() { 0 } else { EXIT_FAILS })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NotContractionBoundary { .. } => EXIT_NORM,
                Error::SizeCap { .. } => EXIT_SIZE,
                _ => EXIT_VALIDATION,
            })
        }
    }
}
