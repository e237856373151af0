use std::path::PathBuf;
use std::process::ExitCode;

use berrynoise::{commands, CliError, RunConfig};
use clap::{Parser, Subcommand};

/// Open-system dynamics and geometric phase of a noisy driven qubit.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the master equation and write the Bloch trajectory.
    Trajectory(Args),
    /// Geometric phase after one period and its ratio to the unitary value.
    Phase(Args),
    /// Parameter sweep or slice bundle from the [sweep] section.
    Sweep(Args),
    /// Correlation kernels and coefficients on a time grid.
    Kernels(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Maximum worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Parse and check the configuration, then exit.
    #[arg(long)]
    validate_only: bool,
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let (name, args) = match &cli.command {
        Command::Trajectory(a) => ("trajectory", a),
        Command::Phase(a) => ("phase", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Kernels(a) => ("kernels", a),
    };
    let cfg = RunConfig::load(&args.config)?;
    if args.validate_only {
        if name == "sweep" && cfg.sweep.is_none() {
            return Err(CliError::Config(
                "the sweep command needs a [sweep] section".into(),
            ));
        }
        return Ok(vec![format!(
            "{}: configuration is valid",
            args.config.display()
        )]);
    }
    match cli.command {
        Command::Trajectory(_) => commands::trajectory(&cfg, &args.out),
        Command::Phase(_) => commands::phase(&cfg, &args.out),
        Command::Sweep(_) => commands::sweep(&cfg, &args.out, args.threads),
        Command::Kernels(_) => commands::kernels(&cfg, &args.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
