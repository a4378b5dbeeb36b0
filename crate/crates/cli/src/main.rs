//! `mpfsim`: scenario-driven sweeps of the photonic filter models.

mod commands;
mod error;
mod quantity;
mod scenario;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{run_oeo, run_passband, run_response, run_snr, RunOptions};
use error::{CliError, CliResult};
use scenario::Scenario;
use table::{Format, Header};

#[derive(Parser)]
#[command(name = "mpfsim", version, about = "Microwave photonic filter sweeps from TOML scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized RF response against tone frequency.
    Response(Args),
    /// SNR and noise figure at the passband centre.
    Snr(Args),
    /// Passband shape around the centre frequency.
    Passband(Args),
    /// Optoelectronic oscillator phase noise.
    Oeo(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Check each row against the reference and exit 4 on any failure.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value_t = 0.5)]
    tol_db: f64,
    /// Root seed, overriding the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Add Monte-Carlo columns.
    #[arg(long)]
    mc: bool,
    /// Report powers in absolute dB instead of relative to the sweep maximum.
    #[arg(long)]
    absolute: bool,
}

type Runner = fn(&Scenario, &RunOptions) -> CliResult<commands::Outcome>;

fn run(cli: Cli) -> CliResult<()> {
    let (args, run): (Args, Runner) = match cli.command {
        Command::Response(a) => (a, run_response),
        Command::Snr(a) => (a, run_snr),
        Command::Passband(a) => (a, run_passband),
        Command::Oeo(a) => (a, run_oeo),
    };
    if !(args.tol_db.is_finite() && args.tol_db >= 0.0) {
        return Err(CliError::config("--tol-db must be a nonnegative number"));
    }
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::config(format!("{}: {e}", args.scenario.display())))?;
    let scn = Scenario::from_toml(&text)?;
    let opts = RunOptions { mc: args.mc, compare: args.compare, tol_db: args.tol_db, seed: args.seed, absolute: args.absolute };
    let outcome = run(&scn, &opts)?;

    let output = scn.output.clone().unwrap_or(scenario::OutputSection { path: None, format: None });
    let format = Format::parse(args.format.as_deref().or(output.format.as_deref()).unwrap_or("csv"))?;
    let sweep = scn.sweep()?;
    let header = Header {
        version: env!("CARGO_PKG_VERSION"),
        scenario: scn.digest(),
        seed: scn.seed(args.seed),
        sweep: sweep.axis.name().to_string(),
        unit: sweep.axis.unit().to_string(),
    };
    let rendered = outcome.table.render(&header, format);
    match args.out.or(output.path.map(PathBuf::from)) {
        Some(path) => std::fs::write(&path, rendered)?,
        None => match std::io::stdout().lock().write_all(rendered.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    if outcome.failures > 0 {
        return Err(CliError::Compare(format!(
            "{} of {} rows outside ±{} dB",
            outcome.failures,
            outcome.table.rows.len(),
            args.tol_db
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mpfsim: {e}");
            e.exit_code()
        }
    }
}
