//! `resolvlab`: command-line workbench for channel-resolvability
//! experiments. Subcommands read a JSON config, run the requested
//! computation, and print CSV or JSON; every run is deterministic given
//! the config and seed.
//!
//! Exit codes: 0 success, 2 invalid config or rejected computation,
//! 3 state-space cap exceeded, 4 infeasible target.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CmdError;

/// Environment variable consulted for the seed when `--seed` and the
/// config's `seed` field are both absent.
const SEED_ENV: &str = "RESOLVLAB_SEED";

#[derive(Parser)]
#[command(
    name = "resolvlab",
    about = "Channel resolvability workbench: bounds, simulations, exact oracles, and rate certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form divergence ceilings, exponents, and thresholds per sweep point.
    Bounds(RunArgs),
    /// Monte Carlo estimate of the expected divergence per sweep point.
    Simulate(RunArgs),
    /// Exact ensemble averages by full codebook enumeration.
    Exact(RunArgs),
    /// The perfect-code showcase instance; needs no config.
    Hamming(OutArgs),
    /// Minimal-rate certificate and achievability verdicts.
    Optimize(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Seed override; beats the config field and the environment.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial-count override for simulation.
    #[arg(long)]
    trials: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(args) => run_config_command(args, |plan, _, _| commands::cmd_bounds(plan)),
        Command::Simulate(args) => run_config_command(args, |plan, seed, trials| {
            commands::cmd_simulate(plan, seed, trials)
        }),
        Command::Exact(args) => run_config_command(args, |plan, _, _| commands::cmd_exact(plan)),
        Command::Hamming(args) => write_output(&args.out, commands::cmd_hamming()),
        Command::Optimize(args) => {
            run_config_command(args, |plan, _, _| commands::cmd_optimize(plan))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run_config_command(
    args: &RunArgs,
    run: impl FnOnce(&config::Plan, u64, u64) -> Result<String, CmdError>,
) -> Result<(), CmdError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CmdError::Config(format!("config: cannot read {}: {e}", args.config.display()))
    })?;
    let cfg = config::parse(&text).map_err(CmdError::Config)?;
    let plan = config::resolve(&cfg).map_err(CmdError::Config)?;
    let seed = resolve_seed(args.seed, plan.seed)?;
    let trials = args.trials.unwrap_or(plan.trials);
    if trials == 0 {
        return Err(CmdError::Config("config: trials must be >= 1".to_string()));
    }
    let output = run(&plan, seed, trials)?;
    write_output(&args.out, output)
}

/// Seed precedence: `--seed`, then the config field, then the environment
/// variable, then zero.
fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> Result<u64, CmdError> {
    if let Some(seed) = flag.or(from_config) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CmdError::Config(format!("{SEED_ENV} is set to {raw:?}, not a 64-bit integer"))
        }),
        Err(_) => Ok(0),
    }
}

fn write_output(out: &Option<PathBuf>, content: String) -> Result<(), CmdError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            CmdError::Config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
