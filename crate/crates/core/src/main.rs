use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use artin_tate::acceptance;
use artin_tate::budget::{Budget, BUDGET_ENV};
use artin_tate::filtered::Mode;
use artin_tate::group::{FiniteGroup, GroupDescriptor};
use artin_tate::problem::{
    parse_problem, ObjectDescriptor, Problem, ProblemFile, Query, QueryOutcome, ReportBundle,
};
use artin_tate::resolution::{corpus, ComplexDescriptor};
use artin_tate::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact Hom/Ext computations for filtered Artin-Tate modules over Z/m.
#[derive(Parser)]
#[command(name = "artin-tate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H^degree(G, μ^{⊗twist}) or of the underlying module of a named object.
    Cohomology {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "object")]
        twist: Option<i64>,
        #[arg(long)]
        object: Option<String>,
        #[command(flatten)]
        ctx: Context,
    },
    /// Ext^degree between two objects; `tate:J` names the Tate object 1(J).
    Ext {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        ctx: Context,
    },
    /// θ comparison on the grid 0 <= i <= max-i, min-j <= j <= max-j.
    ThetaReport {
        #[arg(long, default_value_t = 2)]
        max_i: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        min_j: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        max_j: i64,
        #[command(flatten)]
        ctx: Context,
    },
    /// Cobar cohomology of the big graded ring up to internal degree n.
    KoszulProbe {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        ctx: Context,
    },
    /// Identity checks of the resolution functor on a complex.
    PCheck {
        /// Name of a complex in the shipped corpus; every entry when omitted.
        #[arg(long, conflicts_with = "complex")]
        corpus: Option<String>,
        /// Complex descriptor JSON file.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        ctx: Context,
    },
    /// Runs the acceptance suite and prints the pass/fail matrix.
    Accept {
        /// Criterion number or tag (theta, ext, unit, weight, oracle, adjunction, fprime, fsecond, resolution, koszul).
        #[arg(long)]
        filter: Option<String>,
        /// Perturbs the brute-force oracle; the oracle criterion must then fail.
        #[arg(long)]
        corrupt_oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Runs every query of a problem file.
    Run {
        problem: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Context {
    /// Takes group, modulus, character, objects, seed and budgets from a
    /// problem file; its queries are ignored.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// trivial, cyclic:N, symmetric:N, dihedral:N or klein.
    #[arg(long, default_value = "trivial")]
    group: String,
    #[arg(long, default_value_t = 2)]
    modulus: u64,
    /// Character values, one per generator or one per element.
    #[arg(long, value_delimiter = ',')]
    character: Option<Vec<u64>>,
    #[arg(long)]
    mode: Option<ModeArg>,
    #[arg(long)]
    degree_cap: Option<usize>,
    #[arg(long)]
    budget_mb: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// JSON output (the default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Human-readable table.
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "F")]
    F,
    #[value(name = "Fprime")]
    Fprime,
    #[value(name = "Fsecond")]
    Fsecond,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::F => Mode::F,
            ModeArg::Fprime => Mode::Fprime,
            ModeArg::Fsecond => Mode::Fsecond,
        }
    }
}

fn named_group(name_arg: &str) -> Result<GroupDescriptor, Error> {
    let bad = || Error::schema("--group", format!("unknown group {name_arg:?}"));
    let (name, n) = match name_arg.split_once(':') {
        Some((name, n)) => (name, Some(n.parse::<usize>().map_err(|_| bad())?)),
        None => (name_arg, None),
    };
    let g = match (name, n) {
        ("trivial", None) => FiniteGroup::trivial(),
        ("klein", None) => FiniteGroup::klein_four(),
        ("cyclic", Some(n)) if n >= 1 => FiniteGroup::cyclic(n),
        ("symmetric", Some(n)) if n >= 1 => FiniteGroup::symmetric(n),
        ("dihedral", Some(n)) if n >= 3 => FiniteGroup::dihedral(n),
        _ => return Err(bad()),
    };
    Ok(g.descriptor())
}

impl Context {
    /// A problem file carrying the context and no queries.
    fn base(&self) -> Result<ProblemFile, Error> {
        let mut file = match &self.problem {
            Some(path) => {
                let mut f = parse_problem(&read(path)?)?;
                f.queries.clear();
                f
            }
            None => {
                let mut text = serde_json::json!({
                    "modulus": self.modulus,
                    "group": named_group(&self.group)?,
                });
                if let Some(c) = &self.character {
                    text["twist"] = serde_json::json!({ "character": c });
                }
                parse_problem(&text.to_string())?
            }
        };
        if let Some(mode) = self.mode {
            file.mode = mode.into();
        }
        if let Some(cap) = self.degree_cap {
            file.budget.degree_cap = cap;
        }
        env_budget(&mut file)?;
        if let Some(mb) = self.budget_mb {
            file.budget.memory_mb = mb;
        }
        Ok(file)
    }

    /// Adds `tate:J` objects for names not defined by the problem file.
    fn with_tate(file: &mut ProblemFile, names: &[&str]) -> Result<(), Error> {
        for name in names {
            if file.objects.contains_key(*name) {
                continue;
            }
            let twist = name
                .strip_prefix("tate:")
                .and_then(|j| j.parse().ok())
                .ok_or_else(|| Error::schema("objects", format!("unknown object {name:?}")))?;
            file.objects
                .insert(name.to_string(), ObjectDescriptor::Tate { tate: twist });
        }
        Ok(())
    }
}

/// The environment variable overrides the memory budget of the input.
fn env_budget(file: &mut ProblemFile) -> Result<(), Error> {
    if let Ok(mb) = std::env::var(BUDGET_ENV) {
        file.budget.memory_mb = mb
            .trim()
            .parse()
            .map_err(|_| Error::schema(BUDGET_ENV, format!("not a number: {mb:?}")))?;
    }
    Ok(())
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::schema("$", format!("cannot read {}: {e}", path.display())))
}

fn queries(command: &Command) -> Result<(ProblemFile, Output), Error> {
    let (mut file, queries, output) = match command {
        Command::Cohomology {
            degree,
            twist,
            object,
            ctx,
        } => {
            let twist = if object.is_none() {
                Some(twist.unwrap_or(0))
            } else {
                None
            };
            (
                ctx.base()?,
                vec![Query::Cohomology {
                    degree: *degree,
                    object: object.clone(),
                    twist,
                }],
                ctx.output,
            )
        }
        Command::Ext {
            source,
            target,
            degree,
            ctx,
        } => {
            let mut file = ctx.base()?;
            Context::with_tate(&mut file, &[source, target])?;
            let q = Query::Ext {
                source: source.clone(),
                target: target.clone(),
                degree: *degree,
            };
            (file, vec![q], ctx.output)
        }
        Command::ThetaReport {
            max_i,
            min_j,
            max_j,
            ctx,
        } => {
            let qs = (*min_j..=*max_j)
                .flat_map(|j| {
                    (0..=*max_i).map(move |i| Query::Theta {
                        degree: i,
                        twist: j,
                    })
                })
                .collect();
            (ctx.base()?, qs, ctx.output)
        }
        Command::KoszulProbe { n, ctx } => {
            (ctx.base()?, vec![Query::Koszul { degree: *n }], ctx.output)
        }
        Command::PCheck {
            corpus: name,
            complex,
            depth,
            ctx,
        } => {
            let qs = match (name, complex) {
                (_, Some(path)) => {
                    let text = read(path)?;
                    let de = &mut serde_json::Deserializer::from_str(&text);
                    let c: ComplexDescriptor =
                        serde_path_to_error::deserialize(de).map_err(|e| {
                            Error::schema(e.path().to_string(), e.into_inner().to_string())
                        })?;
                    vec![Query::PCheck {
                        corpus: None,
                        complex: Some(c),
                        depth: *depth,
                    }]
                }
                (Some(n), None) => vec![Query::PCheck {
                    corpus: Some(n.clone()),
                    complex: None,
                    depth: *depth,
                }],
                (None, None) => corpus()?
                    .complexes
                    .iter()
                    .map(|e| Query::PCheck {
                        corpus: Some(e.name.clone()),
                        complex: None,
                        depth: *depth,
                    })
                    .collect(),
            };
            (ctx.base()?, qs, ctx.output)
        }
        Command::Run { problem, output } => {
            let mut file = parse_problem(&read(problem)?)?;
            env_budget(&mut file)?;
            let qs = file.queries.clone();
            (file, qs, *output)
        }
        Command::Accept { .. } => unreachable!("handled separately"),
    };
    file.queries = queries;
    Ok((file, output))
}

/// Short rendering of a JSON value for the table.
fn summary(v: &Value) -> String {
    match v {
        Value::Object(map) if map.contains_key("report") => summary(&map["report"]),
        Value::Object(map) => {
            let keys = [
                "verdict",
                "value",
                "cohomology",
                "passed",
                "diagonal_concentrated",
                "invariant_factors",
            ];
            let picked: BTreeMap<&str, &Value> = keys
                .iter()
                .filter_map(|k| map.get(*k).map(|x| (*k, x)))
                .collect();
            if picked.is_empty() {
                v.to_string()
            } else {
                picked
                    .iter()
                    .map(|(k, x)| format!("{k}={}", compact(x)))
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        }
        other => compact(other),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) => match (map.get("invariant_factors"), map.get("kind")) {
            (Some(Value::Array(f)), _) if f.is_empty() => "0".into(),
            (Some(Value::Array(f)), _) => f
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join("+"),
            (_, Some(Value::String(k))) if k == "exact" => compact(&map["shape"]),
            (_, Some(Value::String(k))) if k == "interval" => match map.get("upper") {
                Some(u) if !u.is_null() => {
                    format!("order in [{}, {}]", compact(&map["lower"]), compact(u))
                }
                _ => format!("order >= {}", compact(&map["lower"])),
            },
            _ => v.to_string(),
        },
        other => other.to_string(),
    }
}

fn print_table(bundle: &ReportBundle) {
    println!(
        "modulus {}  |G| = {}  mode {}",
        bundle.modulus, bundle.group_order, bundle.mode
    );
    println!(
        "{:>3}  {:<11} {:<7} {:<20} {:<9} result",
        "#", "op", "status", "method", "certified"
    );
    for r in &bundle.reports {
        match r {
            QueryOutcome::Ok {
                index,
                op,
                method,
                certified,
                result,
            } => {
                let method = serde_json::to_value(method)
                    .map(|m| compact(&m))
                    .unwrap_or_default();
                println!(
                    "{index:>3}  {op:<11} {:<7} {method:<20} {certified:<9} {}",
                    "ok",
                    summary(result)
                );
            }
            QueryOutcome::Error {
                index,
                op,
                budget,
                message,
            } => {
                let status = if *budget { "budget" } else { "error" };
                println!(
                    "{index:>3}  {op:<11} {status:<7} {:<20} {:<9} {message}",
                    "-", "-"
                );
            }
        }
    }
}

fn error_exit(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::Schema { .. } => EXIT_SCHEMA,
        e if e.is_budget() => EXIT_BUDGET,
        _ => EXIT_FAILURE,
    })
}

fn accept(filter: Option<String>, corrupt_oracle: bool, output: Output) -> ExitCode {
    let opts = acceptance::Options {
        filter,
        corrupt_oracle,
        budget: Budget::from_env(),
    };
    let results = acceptance::run(&opts);
    if output.table {
        for r in &results {
            println!("{}", r.line());
        }
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(&results).expect("serializable")
        );
    }
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Accept {
        filter,
        corrupt_oracle,
        output,
    } = cli.command
    {
        return accept(filter, corrupt_oracle, output);
    }
    let (file, output) = match queries(&cli.command) {
        Ok(x) => x,
        Err(e) => return error_exit(&e),
    };
    let problem = match Problem::resolve(file) {
        Ok(p) => p,
        Err(e) => return error_exit(&e),
    };
    let bundle = problem.run();
    if output.table {
        print_table(&bundle);
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(&bundle).expect("serializable")
        );
    }
    ExitCode::from(bundle.exit_code() as u8)
}
