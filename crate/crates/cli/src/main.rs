//! `flexload` — scenario-driven front end over the scheduling and market
//! library. Reads one JSON scenario file, runs one analysis, and prints a
//! deterministic report (the same scenario always yields identical bytes).

mod commands;
mod error;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use error::CliError;
use output::{OutputFormat, render, report};
use scenario::ScenarioFile;

/// Scheduling and market analysis for duration-differentiated electric loads.
#[derive(Parser)]
#[command(name = "flexload", version, disable_help_subcommand = true)]
struct Cli {
    /// Path to the JSON scenario file describing the instance.
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<PathBuf>,

    /// Write plot-ready CSV series for the subcommand to this path.
    #[arg(long, global = true, value_name = "PATH")]
    emit_plot_data: Option<PathBuf>,

    /// Echoed into the report; no result depends on it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Can the supply serve every load? Exact verdict plus the first violated tail.
    Adequacy,
    /// Least-laxity-first service matrix for the scenario's loads.
    Allocate,
    /// Cheapest supplemental purchases, with and without foresight.
    Procure,
    /// Optimal day-ahead commitment against the scenario distribution.
    Dayahead,
    /// Welfare-maximizing duration assignment for identical consumers.
    Welfare,
    /// Supporting price menu and production, with verification.
    Equilibrium,
    /// Slot-by-slot myopic market simulation.
    Spot,
    /// Forward-market versus spot-market welfare at one common price.
    Compare,
    /// Expand loads (including rate-constrained requests) into unit-rate durations.
    Decompose,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Adequacy => "adequacy",
            Command::Allocate => "allocate",
            Command::Procure => "procure",
            Command::Dayahead => "dayahead",
            Command::Welfare => "welfare",
            Command::Equilibrium => "equilibrium",
            Command::Spot => "spot",
            Command::Compare => "compare",
            Command::Decompose => "decompose",
        }
    }

    fn run(&self, sc: &ScenarioFile) -> Result<commands::CommandOutput, CliError> {
        match self {
            Command::Adequacy => commands::adequacy(sc),
            Command::Allocate => commands::allocate(sc),
            Command::Procure => commands::procure(sc),
            Command::Dayahead => commands::dayahead(sc),
            Command::Welfare => commands::welfare(sc),
            Command::Equilibrium => commands::equilibrium_cmd(sc),
            Command::Spot => commands::spot(sc),
            Command::Compare => commands::compare(sc),
            Command::Decompose => commands::decompose(sc),
        }
    }
}

fn fail(err: &CliError) -> ExitCode {
    let object = json!({ "error": { "kind": err.kind_label(), "message": err.message } });
    println!(
        "{}",
        serde_json::to_string_pretty(&object).expect("error object serializes")
    );
    ExitCode::from(err.exit_code() as u8)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::validation("pass --scenario <path> to choose an instance"))?;
    let (sc, digest) = ScenarioFile::load(path)?;
    let (result, plot) = cli.command.run(&sc)?;
    if let Some(plot_path) = &cli.emit_plot_data {
        std::fs::write(plot_path, plot).map_err(|e| {
            CliError::validation(format!(
                "cannot write plot data {}: {e}",
                plot_path.display()
            ))
        })?;
    }
    let seed = cli.seed.or(sc.seed);
    let envelope = report(cli.command.name(), &digest, seed, result);
    print!("{}", render(&envelope, cli.format));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail(&CliError::validation(e.to_string()));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
