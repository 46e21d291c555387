//! `rbs`: evaluate construction scripts for Reeb-space bubbling
//! pipelines, verify the closed forms against the simplicial oracle,
//! compare emitted reports and certify non-realizability.
//!
//! Exit codes: 0 on success, 1 on parse or input errors, 2 on engine
//! precondition violations.

use clap::{Args, Parser, Subcommand};
use rbs_core::distinguish::{distinguish, thm3_certificate, RingData};
use rbs_core::oracle;
use rbs_core::script::{self, emit_report, ring_data_from_report};
use rbs_core::CoefficientRing;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PARSE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;

#[derive(Parser)]
#[command(name = "rbs", version, about = "Exact Reeb-space bubbling calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a script and print (or write) the JSON report.
    Eval(EvalArgs),
    /// Oracle checks against explicit simplicial models.
    Oracle(OracleArgs),
    /// Compare two emitted reports by their computed invariants.
    Distinguish {
        report_a: PathBuf,
        report_b: PathBuf,
    },
    /// Check the non-realizability certificate on a script's pipeline.
    CertifyThm3 { script: PathBuf },
    /// Parse a script, print the canonical form, and verify it reparses
    /// to the same abstract script.
    Roundtrip { script: PathBuf },
}

#[derive(Args)]
struct EvalArgs {
    script: PathBuf,
    /// Override the script's coefficient ring (Z | Zmod:N | Q).
    #[arg(long)]
    coeff: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    command: OracleCommand,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare the closed-form bubble homology on a disc base with the
    /// glued simplicial model.
    VerifyProp3 {
        /// Target dimension (at most 4).
        #[arg(long)]
        n: usize,
        /// Generating bouquet, e.g. "S1" or "[S1,S1]".
        #[arg(long)]
        s: String,
        #[arg(long)]
        coeff: Option<String>,
        /// Simplex budget; defaults to RBS_ORACLE_BUDGET or 200000.
        #[arg(long)]
        budget: Option<usize>,
    },
}

enum Failure {
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Precondition(_) => EXIT_PRECONDITION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) => m,
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse_script(path: &PathBuf) -> Result<script::Script, Failure> {
    let text = read_file(path)?;
    script::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse_coeff(value: &Option<String>) -> Result<Option<CoefficientRing>, Failure> {
    match value {
        None => Ok(None),
        Some(text) => CoefficientRing::parse(text)
            .map(Some)
            .map_err(|e| Failure::Parse(e.to_string())),
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout();
    let _ = writeln!(out, "{text}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval(args) => {
            let s = parse_script(&args.script)?;
            let ring = parse_coeff(&args.coeff)?;
            let eval = script::evaluate_with_ring(&s, ring)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let report = emit_report(&s, &eval);
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            match &args.json {
                Some(path) => std::fs::write(path, text + "\n")
                    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
                None => emit(&text),
            }
            Ok(())
        }
        Command::Oracle(args) => match args.command {
            OracleCommand::VerifyProp3 {
                n,
                s,
                coeff,
                budget,
            } => {
                let ring = parse_coeff(&coeff)?.unwrap_or(CoefficientRing::Integers);
                let trimmed = s.trim();
                let ingredients: Vec<_> = if let Some(inner) =
                    trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']'))
                {
                    inner
                        .split(',')
                        .map(|part| script::parse_manifold(part.trim()))
                        .collect::<Result<_, _>>()
                        .map_err(|e| Failure::Parse(e.to_string()))?
                } else {
                    vec![script::parse_manifold(trimmed)
                        .map_err(|e| Failure::Parse(e.to_string()))?]
                };
                let budget = budget.unwrap_or_else(oracle::budget_from_env);
                let check = oracle::verify_prop3(n, &ingredients, ring, budget)
                    .map_err(|e| Failure::Precondition(e.to_string()))?;
                let out = json!({
                    "matches": check.matches,
                    "engine": check.engine.to_string(),
                    "oracle": check.oracle.to_string(),
                    "faces_used": check.faces_used,
                });
                emit(&serde_json::to_string_pretty(&out).unwrap());
                Ok(())
            }
        },
        Command::Distinguish { report_a, report_b } => {
            let load = |path: &PathBuf| -> Result<RingData, Failure> {
                let text = read_file(path)?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
                ring_data_from_report(&value)
                    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
            };
            let a = load(&report_a)?;
            let b = load(&report_b)?;
            let verdict = distinguish(&a, &b).map_err(|e| Failure::Precondition(e.to_string()))?;
            let out = serde_json::to_value(&verdict).expect("verdicts serialize");
            emit(&serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::CertifyThm3 { script: path } => {
            let s = parse_script(&path)?;
            let eval = script::evaluate(&s).map_err(|e| Failure::Precondition(e.to_string()))?;
            let cert =
                thm3_certificate(&eval.state).map_err(|e| Failure::Precondition(e.to_string()))?;
            let out = serde_json::to_value(&cert).expect("certificates serialize");
            emit(&serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Roundtrip { script: path } => {
            let s = parse_script(&path)?;
            let canonical = script::print(&s);
            let reparsed = script::parse(&canonical)
                .map_err(|e| Failure::Parse(format!("canonical form failed: {e}")))?;
            if reparsed != s {
                return Err(Failure::Parse(
                    "round-trip mismatch: print followed by parse changed the script".into(),
                ));
            }
            let mut out = std::io::stdout();
            let _ = write!(out, "{canonical}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
