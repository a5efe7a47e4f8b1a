//! Batch driver: reads a JSON run configuration, runs one subcommand and
//! writes a CSV table plus a JSON sidecar.

#![allow(clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{error::ErrorKind, Parser};

pub use commands::{execute, Command};
pub use config::RunConfig;
pub use error::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
pub use table::{Sidecar, Table};

#[derive(Debug, Parser)]
#[command(
    name = "nearsphere",
    version,
    about = "Curvature integrals and stability checks for nearly spherical hypersurfaces"
)]
pub struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// CSV output path; the sidecar goes next to it with a .json extension.
    /// Without it the CSV is written to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random fields and random matrices
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Size of the worker pool
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Exit with status 3 when a check predicate fails
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Parse arguments, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run_cli(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("nearsphere: {e}");
            e.exit_code()
        }
    }
}

pub fn run_cli(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        // a pool that already exists (repeated in-process runs) is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config <path> is required".into()))?;
    let cfg = RunConfig::load(path)?;
    let table = execute(cli.command, &cfg, cli.seed)?;
    match &cli.out {
        Some(out) => {
            table.write_csv(std::fs::File::create(out)?)?;
            Sidecar::new(cli.command.name(), cli.seed, cli.check, &table, &cfg).write(&table::sidecar_path(out))?;
        }
        None => table.write_csv(std::io::stdout().lock())?,
    }
    if cli.check && !table.passed {
        return Err(CliError::CheckFailed(format!("{} predicates violated", cli.command.name())));
    }
    Ok(())
}
