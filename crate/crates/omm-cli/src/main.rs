//! `omm` — steady-state simulator for an opto-magnomechanical system.
//!
//! Four subcommands drive the library: `entangle` evaluates the
//! stationary magnon–photon entanglement at one operating point, `sweep`
//! maps it over parameter grids, `transfer` runs the two-step pulsed
//! readout of a squeezed magnon state, and `couplings` integrates
//! magnetoelastic coupling rates from a sampled displacement mode.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod mode_input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use config::{ConfiguredCommand, OutputFormat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "omm",
    version,
    about = "Steady-state entanglement and pulsed state readout in opto-magnomechanics"
)]
struct Cli {
    /// Configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override a scalar config value by dotted path, e.g.
    /// --set params.temperature_kelvin=0.145 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory (overrides output.dir).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Output format (overrides output.format).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads for sweeps and Wigner grids (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stationary magnon–photon entanglement at one operating point.
    Entangle,
    /// Entanglement over one or two parameter axes.
    Sweep,
    /// Two-step readout: magnon → phonon swap, then pulsed optical output.
    Transfer,
    /// Magnetoelastic coupling rates from a sampled displacement mode.
    Couplings,
}

impl Command {
    fn configured(&self) -> ConfiguredCommand {
        match self {
            Command::Entangle => ConfiguredCommand::Entangle,
            Command::Sweep => ConfiguredCommand::Sweep,
            Command::Transfer => ConfiguredCommand::Transfer,
            Command::Couplings => ConfiguredCommand::Couplings,
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }

    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <PATH> is required".into()))?;
    let mut config = config::load_config(config_path, &cli.set)?;

    let wanted = cli.command.configured();
    if config.configured_command != wanted {
        return Err(CliError::Config(format!(
            "config `{}` provides the blocks of `{}` but `{}` was invoked",
            config_path.display(),
            config.configured_command.name(),
            wanted.name()
        )));
    }

    if let Some(dir) = &cli.out {
        config.output.dir = dir.clone();
    }
    if let Some(format) = cli.format {
        config.output.format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }

    match cli.command {
        Command::Entangle => commands::run_entangle(&config),
        Command::Sweep => commands::run_sweep(&config),
        Command::Transfer => commands::run_transfer(&config),
        Command::Couplings => commands::run_couplings(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
