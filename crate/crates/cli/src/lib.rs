//! Command-line front end: loads BVP specs, runs checks, classification,
//! reduction and validation, and writes TOML reports and CSV figure data.
//!
//! Exit codes: `0` every requested check passed, `1` a check failed or a
//! computation aborted (the report then has a `[failure]` section), `2`
//! usage or spec-file errors.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod report;
pub mod spec;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use heatsym_core::symfun::parse_real;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Spec { path: String, line: usize, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot render report: {0}")]
    Render(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec { .. } | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Render(_) => 1,
        }
    }
}

fn real(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "heatsym",
    version,
    about = "Symmetries and exact solutions of flux-driven nonlinear heat conduction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub knobs: Knobs,
}

/// Flags shared by all subcommands; unset knobs take per-command defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Knobs {
    /// TOML problem file with keys d, q, u_inf
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Group, e.g. Td, Tt, Tx, Tk(-2), Tkp(1,-1/3), Tke(1), Te, Tc, lincomb(1,0,2)
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Sample count: jets (classify, check), table points (exact),
    /// x samples (figure1) or intervals (validate)
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Seed of the jet sampler
    #[arg(long, global = true, env = "HEATSYM_SEED")]
    pub seed: Option<u64>,

    /// Tolerance of the command's pass criterion
    #[arg(long, global = true, value_parser = real)]
    pub tol: Option<f64>,

    /// Directory for report.toml and CSV output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Group parameters to test, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = real)]
    pub eps_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Admitted catalogue groups and the matching classification case
    Classify,
    /// Invariance of the spec under one group (--group)
    Check,
    /// Similarity reduction of a power-law spec with constant flux
    Reduce,
    /// Solve the reduced problem by shooting
    Shoot(ShootArgs),
    /// Tabulate the exact k = -3/2 branch and check the reduced equation
    Exact(ExactArgs),
    /// Profiles u(t, x) of the exact solution at fixed times
    Figure1(FigureArgs),
    /// Evolve the exact solution with the finite-difference scheme
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ShootArgs {
    /// Right end of the returned profile
    #[arg(long, default_value_t = 40.0, value_parser = real)]
    pub omega_max: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    /// Flux amplitude; defaults to the spec's q0, else -1
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub q0: Option<f64>,

    /// tau interval of the table
    #[arg(long, value_delimiter = ',', value_parser = real, default_values_t = [0.01, 100.0])]
    pub tau_range: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true, value_parser = real)]
    pub q0: f64,

    #[arg(long, value_delimiter = ',', value_parser = real, default_values_t = [0.5, 5.0])]
    pub times: Vec<f64>,

    #[arg(long, value_delimiter = ',', value_parser = real, default_values_t = [0.01, 10.0])]
    pub x_range: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true, value_parser = real)]
    pub q0: f64,

    #[arg(long, default_value_t = 0.5, value_parser = real)]
    pub t0: f64,

    #[arg(long, default_value_t = 1.0, value_parser = real)]
    pub t1: f64,

    #[arg(long, value_delimiter = ',', value_parser = real, default_values_t = [0.2, 40.0])]
    pub x_range: Vec<f64>,

    /// Also run n/4 and n/2 and require second-order convergence
    #[arg(long)]
    pub convergence: bool,

    /// Left end of the region over which the convergence order is measured
    #[arg(long, value_parser = real)]
    pub order_from: Option<f64>,
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Run the parsed command line, writing files under `--out` if given.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(&cli.command, &cli.knobs)
}
