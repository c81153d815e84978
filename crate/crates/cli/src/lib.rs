//! Command-line front end for the treadmilling solver.
//!
//! Subcommands `solve`, `sweep`, `profiles` and `validate` read a flat
//! key-value config (see [`config`]) and emit CSV or JSON.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use treadmill_core::Error as CoreError;

use crate::commands::{ProfileOptions, SweepOptions, ValidateOptions};
use crate::config::RunConfig;
use crate::output::Format;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// A `validate` check failed.
    pub const CHECK_FAILED: i32 = 1;
    /// Malformed config, flags or parameters.
    pub const INPUT_ERROR: i32 = 2;
    /// Parameters admit no treadmilling state.
    pub const NO_TREADMILLING: i32 = 3;
    pub const NUMERIC_FAILURE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => exit::INPUT_ERROR,
            CliError::Numeric(_) => exit::NUMERIC_FAILURE,
            CliError::Core(e) => match e {
                CoreError::NoTreadmillingState(_) => exit::NO_TREADMILLING,
                CoreError::NumericFailure(_)
                | CoreError::OracleInconsistent { .. }
                | CoreError::EstimateUnavailable(_) => exit::NUMERIC_FAILURE,
                _ => exit::INPUT_ERROR,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "treadmill",
    version,
    about = "Steady treadmilling of an elastic shell on a rigid bead"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Key-value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set chem.mu_inf=0.8`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        RunConfig::load(self.config.as_deref(), &self.overrides)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the treadmilling state.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Solve over a grid of nondimensional bead radii.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-6)]
        eta_min: f64,
        #[arg(long, default_value_t = 1e6)]
        eta_max: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Linear instead of logarithmic spacing.
        #[arg(long)]
        linear: bool,
    },
    /// Radial stress, stretch, flux and chemical-potential profiles.
    Profiles {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 101)]
        grid_n: usize,
        /// Outer radius for a mechanics-only profile (requires --v0).
        #[arg(long, requires = "v0")]
        r1: Option<f64>,
        /// Accretion speed for a mechanics-only profile (requires --r1).
        #[arg(long, requires = "r1")]
        v0: Option<f64>,
    },
    /// Check the energy assumptions and the uniqueness of the root.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        oracle_n: usize,
    },
}

/// Runs a parsed command, returning the exit code. Errors are reported on
/// `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "treadmill: {e}");
            e.exit_code()
        }
    }
}

fn emit(common: &Common, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve { common } => {
            let report = commands::solve(&common.load()?)?;
            let text = commands::render_solve(&report, common.format.unwrap_or(Format::Json))?;
            emit(&common, &text, stdout)?;
            Ok(exit::SUCCESS)
        }
        Command::Sweep {
            common,
            eta_min,
            eta_max,
            points,
            linear,
        } => {
            let opts = SweepOptions {
                eta_min,
                eta_max,
                points,
                linear,
            };
            let table = commands::sweep(&common.load()?, &opts)?;
            let text = commands::render_sweep(&table, common.format.unwrap_or(Format::Csv))?;
            emit(&common, &text, stdout)?;
            Ok(exit::SUCCESS)
        }
        Command::Profiles {
            common,
            grid_n,
            r1,
            v0,
        } => {
            let opts = ProfileOptions {
                grid_n,
                geometry: r1.zip(v0),
            };
            let table = commands::profiles(&common.load()?, &opts)?;
            let text = commands::render_profiles(&table, common.format.unwrap_or(Format::Csv))?;
            emit(&common, &text, stdout)?;
            Ok(exit::SUCCESS)
        }
        Command::Validate { common, oracle_n } => {
            let opts = ValidateOptions {
                oracle_points: oracle_n,
                ..ValidateOptions::default()
            };
            let report = commands::validate(&common.load()?, &opts)?;
            let text = commands::render_validate(&report, common.format.unwrap_or(Format::Json))?;
            emit(&common, &text, stdout)?;
            Ok(if report.passed {
                exit::SUCCESS
            } else {
                exit::CHECK_FAILED
            })
        }
    }
}
