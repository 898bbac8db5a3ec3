mod commands;
mod doc;
mod encode;
mod failure;
mod selftest;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use symplectic_core::corpus::DEFAULT_SEED;
use symplectic_core::finabel::DEFAULT_ENUMERATION_BOUND;

use commands::{Outcome, Settings};
use doc::Header;
use failure::Failure;

/// Exact computations with finite Heisenberg groups and their Schrodinger models.
#[derive(Debug, Parser)]
#[command(name = "symplectic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for the randomized parts of the self-test corpus.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest group order handed to exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    bound: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the lagrangian subgroups of a symplectic space.
    Lagrangians { job: Option<PathBuf> },
    /// Describe the Schrodinger model of a lagrangian pair.
    Model { job: Option<PathBuf> },
    /// Matrices of Heisenberg elements acting on a model.
    Act { job: Option<PathBuf> },
    /// Build and verify the intertwiner between two models.
    Intertwine { job: Option<PathBuf> },
    /// Scalar of a round trip or a triple of intertwiners.
    Compose { job: Option<PathBuf> },
    /// Split-model operations: graphs, shears, normal forms, sections.
    Quasisplit { job: Option<PathBuf> },
    /// Glue descent data or decide torsor liftings.
    Descent { job: Option<PathBuf> },
    /// Run the seeded corpus of identity checks.
    Selftest { job: Option<PathBuf> },
}

impl Command {
    fn kind(&self) -> &'static str {
        match self {
            Command::Lagrangians { .. } => "lagrangians",
            Command::Model { .. } => "model",
            Command::Act { .. } => "act",
            Command::Intertwine { .. } => "intertwine",
            Command::Compose { .. } => "compose",
            Command::Quasisplit { .. } => "quasisplit",
            Command::Descent { .. } => "descent",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn job(&self) -> Option<&PathBuf> {
        match self {
            Command::Lagrangians { job }
            | Command::Model { job }
            | Command::Act { job }
            | Command::Intertwine { job }
            | Command::Compose { job }
            | Command::Quasisplit { job }
            | Command::Descent { job }
            | Command::Selftest { job } => job.as_ref(),
        }
    }
}

fn read_job(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::input(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    Ok(serde_json::from_str(text)?)
}

/// Checks the header before the typed parse so that a wrong kind is
/// reported as such rather than as a missing field.
fn check_header(text: &str, kind: &str) -> Result<(), Failure> {
    let _: Value = parse(text)?;
    let header: Header = parse(text)?;
    if header.version != doc::VERSION {
        return Err(Failure::input(format!(
            "unsupported document version {:?}; expected {:?}",
            header.version,
            doc::VERSION
        )));
    }
    if header.kind != kind {
        return Err(Failure::input(format!(
            "the document is a {:?} job but the subcommand is {kind:?}",
            header.kind
        )));
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let kind = cli.command.kind();
    let settings = Settings {
        seed: cli.seed,
        bound: cli.bound,
    };
    if matches!(cli.command, Command::Selftest { job: None }) {
        return selftest::run(settings.seed, settings.bound);
    }
    let text = read_job(cli.command.job())?;
    check_header(&text, kind)?;
    match &cli.command {
        Command::Lagrangians { .. } => commands::lagrangians(parse(&text)?, &settings),
        Command::Model { .. } => commands::model(parse(&text)?),
        Command::Act { .. } => commands::act_job(parse(&text)?),
        Command::Intertwine { .. } => commands::intertwine(parse(&text)?),
        Command::Compose { .. } => commands::compose(parse(&text)?),
        Command::Quasisplit { .. } => commands::quasisplit(parse(&text)?),
        Command::Descent { .. } => commands::descent(parse(&text)?),
        Command::Selftest { .. } => {
            let _: doc::SelftestJob = parse(&text)?;
            selftest::run(settings.seed, settings.bound)
        }
    }
}

fn emit(cli: &Cli, document: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(document).expect("JSON values serialize");
    text.push('\n');
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("cannot write standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let (document, code) = match execute(&cli) {
        Ok(outcome) => {
            let all = outcome.checks.iter().all(|c| c.passed);
            if !cli.quiet {
                eprintln!("{kind}: {}", if all { "all checks passed" } else { "some checks FAILED" });
                for c in &outcome.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    if c.detail.is_empty() {
                        eprintln!("  {mark} {}", c.identity);
                    } else {
                        eprintln!("  {mark} {}: {}", c.identity, c.detail);
                    }
                }
            }
            let checks: Vec<Value> = outcome
                .checks
                .iter()
                .map(|c| json!({"identity": c.identity, "passed": c.passed}))
                .collect();
            let document = json!({
                "version": doc::VERSION,
                "kind": kind,
                "status": if all { "ok" } else { "check_failed" },
                "result": outcome.result,
                "checks": checks,
            });
            (document, if all { 0 } else { 1 })
        }
        Err(f) => {
            if !cli.quiet {
                eprintln!("{kind}: {}", f.message());
            }
            let mut error = json!({"kind": f.kind(), "message": f.message()});
            if let Some(d) = f.details() {
                error["details"] = d.clone();
            }
            let document = json!({
                "version": doc::VERSION,
                "kind": kind,
                "status": "error",
                "error": error,
            });
            (document, f.exit_code())
        }
    };
    if let Err(f) = emit(&cli, &document) {
        eprintln!("{kind}: {}", f.message());
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
