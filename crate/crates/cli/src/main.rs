use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::{Format, ScenarioConfig};
use error::CliError;

/// Exact dephasing of a quantum system coupled to a bosonic bath.
#[derive(Parser)]
#[command(name = "dephase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decoherence function on the time grid.
    Gamma(RunArgs),
    /// Reduced density matrix elements on the time grid.
    Rho(RunArgs),
    /// Closed form against truncated brute-force evolution (exit 3 on mismatch).
    OracleCompare(RunArgs),
    /// Regime fits and the completeness verdict for a spectral bath.
    Regimes(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration (JSON).
    #[arg(short, long)]
    config: PathBuf,
    /// Output file; defaults to `output.path` from the config, then stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Include the bath-induced counter-term.
    #[arg(long)]
    renormalize: bool,
    /// Oracle Hilbert-space dimension budget.
    #[arg(long)]
    budget: Option<usize>,
}

impl RunArgs {
    /// Loads the config with command-line overrides applied; the output
    /// path is taken out so it does not appear in the echoed config.
    fn load(&self) -> Result<(ScenarioConfig, Option<PathBuf>), CliError> {
        let mut config = ScenarioConfig::load(&self.config)?;
        if let Some(f) = self.format {
            config.output.format = f;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::validation(format!(
                    "--tolerance must be positive, got {t}"
                )));
            }
            config.flags.tolerance = Some(t);
        }
        if self.renormalize {
            config.flags.renormalize = true;
        }
        if let Some(b) = self.budget {
            config.flags.budget = Some(b);
        }
        let path = self
            .output
            .clone()
            .or(config.output.path.take().map(PathBuf::from));
        Ok((config, path))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gamma(args) => {
            let (config, path) = args.load()?;
            commands::gamma(&config)?.write_to(path.as_deref())
        }
        Command::Rho(args) => {
            let (config, path) = args.load()?;
            commands::rho(&config)?.write_to(path.as_deref())
        }
        Command::OracleCompare(args) => {
            let (config, path) = args.load()?;
            let (table, pass) = commands::oracle_compare(&config)?;
            table.write_to(path.as_deref())?;
            if pass {
                Ok(())
            } else {
                Err(CliError::comparison(
                    "oracle and closed form differ beyond tolerance",
                ))
            }
        }
        Command::Regimes(args) => {
            let (config, path) = args.load()?;
            let (table, summary) = commands::regimes(&config)?;
            table.write_to(path.as_deref())?;
            eprintln!("{summary}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.code.into()
        }
    }
}
