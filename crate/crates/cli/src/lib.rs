//! Config-driven front end for `qms-core`: verification reports, trajectory
//! files and the catalog listing.

pub mod commands;
pub mod config;
pub mod floatfmt;
pub mod report;
pub mod trajectory_io;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{RunOptions, Status};
pub use floatfmt::FloatFormat;

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "QMS_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] qms_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(qms_core::Error::Config(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qms", version, about = "Verify and simulate superintegrable Hamiltonians")]
pub struct Cli {
    /// Overrides the seed in the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default: $QMS_OUT_DIR or the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sample-point evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = FloatFormat::Decimal)]
    pub float_format: FloatFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brackets, rank certificate and extra-integral checks; writes `<stem>.report`.
    Verify { config: PathBuf },
    /// Integrates the `[simulation]` block; writes `<stem>.traj`.
    Simulate { config: PathBuf },
    /// Lists the catalog families.
    Catalog,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already configured: {e}");
        }
    }
    let out_dir = cli
        .out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let opts = RunOptions {
        seed: cli.seed,
        out_dir,
        floats: cli.float_format,
    };
    let result = match &cli.command {
        Command::Catalog => {
            print!("{}", commands::catalog_listing());
            return 0;
        }
        Command::Verify { config } => commands::verify(config, &opts),
        Command::Simulate { config } => commands::simulate(config, &opts),
    };
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if let Some(path) = outcome.output {
                println!("wrote {}", path.display());
            }
            match outcome.status {
                Status::Pass => 0,
                Status::Fail => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
