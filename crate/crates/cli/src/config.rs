//! Command-line parsing and the validated [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toricfam::kahler::KAHLER_SEED;

use crate::run::CliError;

pub const DEFAULT_TOL_FD: f64 = 1e-5;
pub const DEFAULT_TOL_CHECK: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "toricfam",
    version,
    about = "Exact moment-polytope and toric Kähler checks for exponential families"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for sampled check points (decimal or 0x-prefixed hex).
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Tolerance for comparisons against finite differences.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_fd: Option<f64>,
    /// Tolerance for direct numeric comparisons.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_check: Option<f64>,
    /// Offset C of the torification, comma-separated rationals in 4π units.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub c_offset: Vec<String>,
    #[command(subcommand)]
    pub command: TopCommand,
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Family file (JSON).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Built-in binomial family of degree N.
    #[arg(long, value_name = "N", allow_hyphen_values = true)]
    pub binomial: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum TopCommand {
    /// Inspect a family.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Marginal polytope conv F(Ω).
    Hull(InputArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// End-to-end worked examples.
    Example {
        #[command(subcommand)]
        command: ExampleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// ψ, η and the Fisher metric at θ.
    Show {
        #[command(flatten)]
        input: InputArgs,
        /// Natural parameter, comma-separated (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// A(M) = -T(Δ_m) + C, exactly.
    Theorem(InputArgs),
    /// Vertex differences of the moment polytope are integral (4π units).
    Corollary {
        #[command(flatten)]
        input: InputArgs,
        /// Polytope JSON file to check instead of a family.
        #[arg(long)]
        polytope: Option<PathBuf>,
    },
    /// T∘α(p) + C = A(E_p F) on seeded rational distributions.
    Identity {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Closedness, Hamiltonian, equivariance and isometry suites.
    Kahler(InputArgs),
}

#[derive(Debug, Subcommand)]
pub enum ExampleCommand {
    /// Full pipeline for the binomial family.
    Binomial {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    File(PathBuf),
    Binomial(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    FamilyShow { theta: Vec<String> },
    Hull,
    VerifyTheorem,
    VerifyCorollary { polytope: Option<PathBuf> },
    VerifyIdentity { samples: usize },
    VerifyKahler,
    ExampleBinomial { n: i64 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FamilyShow { .. } => "family show",
            Command::Hull => "hull",
            Command::VerifyTheorem => "verify theorem",
            Command::VerifyCorollary { .. } => "verify corollary",
            Command::VerifyIdentity { .. } => "verify identity",
            Command::VerifyKahler => "verify kahler",
            Command::ExampleBinomial { .. } => "example binomial",
        }
    }
}

/// A fully validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` only for `example binomial` and `verify corollary --polytope`.
    pub input: Option<Input>,
    pub c_offset: Vec<String>,
    pub tol_fd: f64,
    pub tol_check: f64,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, input) = match cli.command {
            TopCommand::Family {
                command: FamilyCommand::Show { input, theta },
            } => (Command::FamilyShow { theta }, Some(input)),
            TopCommand::Hull(input) => (Command::Hull, Some(input)),
            TopCommand::Verify { command } => match command {
                VerifyCommand::Theorem(input) => (Command::VerifyTheorem, Some(input)),
                VerifyCommand::Corollary { input, polytope } => {
                    let has_family = input.file.is_some() || input.binomial.is_some();
                    if polytope.is_some() && has_family {
                        return Err(CliError::field(
                            "--polytope",
                            "give either --polytope or a family, not both",
                        ));
                    }
                    let input = if polytope.is_some() { None } else { Some(input) };
                    (Command::VerifyCorollary { polytope }, input)
                }
                VerifyCommand::Identity { input, samples } => {
                    if samples == 0 {
                        return Err(CliError::field("--samples", "must be at least 1"));
                    }
                    (Command::VerifyIdentity { samples }, Some(input))
                }
                VerifyCommand::Kahler(input) => (Command::VerifyKahler, Some(input)),
            },
            TopCommand::Example {
                command: ExampleCommand::Binomial { n },
            } => (Command::ExampleBinomial { n }, None),
        };
        let input = input.map(resolve_input).transpose()?;
        let tol_fd = positive("--tol-fd", cli.tol_fd.unwrap_or(DEFAULT_TOL_FD))?;
        let tol_check = positive("--tol-check", cli.tol_check.unwrap_or(DEFAULT_TOL_CHECK))?;
        Ok(RunConfig {
            command,
            input,
            c_offset: cli.c_offset,
            tol_fd,
            tol_check,
            format: cli.format,
            seed: cli.seed.unwrap_or(KAHLER_SEED),
        })
    }
}

fn resolve_input(args: InputArgs) -> Result<Input, CliError> {
    match (args.file, args.binomial) {
        (Some(path), None) => Ok(Input::File(path)),
        (None, Some(n)) => Ok(Input::Binomial(n)),
        (Some(_), Some(_)) => Err(CliError::field("--file", "give exactly one of --file and --binomial")),
        (None, None) => Err(CliError::field(
            "--file",
            "an input is required: --file PATH or --binomial N",
        )),
    }
}

fn positive(field: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::field(
            field,
            format!("tolerance must be positive and finite, got {value}"),
        ))
    }
}
