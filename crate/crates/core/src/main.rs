use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use relfix::checker::{compare_theorems, Budgets, TheoremId};
use relfix::document::{builtin, parse_instance, ParsedInstance};
use relfix::properties::{run_properties, Mutant, PropertyConfig, DEFAULT_CASES, DEFAULT_SEED};
use relfix::report::{self, Format};

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "relfix", version, about = "Relation-theoretic fixed-point theorem checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Check theorem hypotheses on an instance document.
    Check {
        /// A TOML document, or example4.1 / example4.2 / example4.3.
        file: String,
        /// Comma-separated theorem ids; defaults to the document's list.
        #[arg(long, value_delimiter = ',')]
        theorems: Vec<String>,
        /// key=value overrides: pairs, terms, quad_points, max_iters.
        #[arg(long)]
        budget: Vec<String>,
    },
    /// Run the Picard iteration.
    Solve {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Start from every point of a finite X(f, R).
        #[arg(long, conflicts_with = "x0")]
        all_starts: bool,
        #[arg(long)]
        budget: Vec<String>,
    },
    /// Rerun a worked example and diff it against its golden report.
    Reproduce { id: String },
    /// Run the seeded property suite.
    Properties {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: u32,
        #[arg(long, hide = true)]
        mutant: bool,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("relfix: {msg}");
    ExitCode::from(USAGE)
}

fn load(file: &str) -> Result<ParsedInstance, String> {
    let (origin, text) = match (Path::new(file).exists(), builtin(file)) {
        (false, Some(text)) => (file.to_string(), text.to_string()),
        _ => (file.to_string(), std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?),
    };
    parse_instance(&text).map_err(|d| format!("{origin}:{}:{}: {}: {}", d.line, d.column, d.key, d.message))
}

fn apply_budgets(b: &mut Budgets, overrides: &[String]) -> Result<(), String> {
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| format!("budget {o:?} is not key=value"))?;
        let n: usize = v.parse().map_err(|_| format!("budget {k} needs a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err(format!("budget {k} must be positive"));
        }
        match k {
            "pairs" => b.pairs = n,
            "terms" => b.terms = n,
            "quad_points" => b.quad_points = n,
            "max_iters" => b.max_iters = n,
            _ => return Err(format!("unknown budget {k:?}")),
        }
    }
    Ok(())
}

fn name_of(p: &ParsedInstance, file: &str) -> String {
    p.document.name.clone().unwrap_or_else(|| file.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Machine => Format::Machine,
    };
    match cli.command {
        Command::Check { file, theorems, budget } => {
            let mut p = match load(&file) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            if let Err(e) = apply_budgets(&mut p.budgets, &budget) {
                return usage(e);
            }
            let ids = if theorems.is_empty() {
                p.theorems.clone()
            } else {
                match theorems.iter().map(|t| t.parse::<TheoremId>()).collect::<Result<Vec<_>, _>>() {
                    Ok(ids) => ids,
                    Err(e) => return usage(e),
                }
            };
            if ids.is_empty() {
                return usage("no theorems requested; pass --theorems or list them in the document");
            }
            let rows = match compare_theorems(&p.instance, &ids, &p.budgets) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let summary = match report::summarize(&name_of(&p, &file), &p.instance) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print!("{}", report::render_check(&summary, &rows, format));
            ExitCode::from(report::exit_code(&rows) as u8)
        }
        Command::Solve { file, x0, all_starts, budget } => {
            let mut p = match load(&file) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            if let Err(e) = apply_budgets(&mut p.budgets, &budget) {
                return usage(e);
            }
            let starts = if all_starts {
                match report::all_starts(&p.instance) {
                    Ok(s) => s,
                    Err(e) => return usage(e),
                }
            } else {
                let x0 = match x0.map(|s| relfix::document::Number::Text(s).value()).transpose() {
                    Ok(x) => x.or(p.x0),
                    Err(e) => return usage(e),
                };
                match x0 {
                    Some(x) => vec![x],
                    None => match relfix::solver::compute_x_f_r(&p.instance, p.instance.relation()).map(|s| s.witness) {
                        Ok(Some(x)) => vec![x],
                        _ => return usage("X(f, R) is empty; give --x0"),
                    },
                }
            };
            let runs = match report::solve_runs(&p.instance, &starts, &p.budgets) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let summary = match report::summarize(&name_of(&p, &file), &p.instance) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print!("{}", report::render_solve(&summary, &runs, format));
            let reached = runs.iter().all(|r| r.fixed_point.is_some());
            ExitCode::from(if reached { 0 } else { 1 })
        }
        Command::Reproduce { id } => {
            let Some(golden) = report::golden(&id) else {
                return usage(format!("unknown example {id:?}; choose 4.1, 4.2 or 4.3"));
            };
            let s = match report::scenario(&id) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let text = report::render_scenario(&s, Format::Text);
            print!("{}", report::render_scenario(&s, format));
            if text == golden && s.confirmed() {
                eprintln!("reproduce {}: matches the golden report", s.id);
                ExitCode::SUCCESS
            } else {
                for (i, (a, b)) in text.lines().zip(golden.lines()).enumerate() {
                    if a != b {
                        eprintln!("first difference at line {}:\n  got      {a}\n  expected {b}", i + 1);
                        break;
                    }
                }
                eprintln!("reproduce {}: differs from the golden report", s.id);
                ExitCode::from(1)
            }
        }
        Command::Properties { seed, cases, mutant } => {
            let cfg = PropertyConfig { seed, cases, mutant: mutant.then_some(Mutant::NfDropsTerm) };
            let out = match run_properties(cfg) {
                Ok(o) => o,
                Err(e) => return usage(e),
            };
            match format {
                Format::Text => print!("{}", out.render()),
                Format::Machine => println!("{}", serde_json::to_string_pretty(&out).expect("outcome serializes")),
            }
            ExitCode::from(if out.passed() { 0 } else { 1 })
        }
    }
}
