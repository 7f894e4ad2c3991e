//! `fracsum`: staircase tabulation, fractal transforms, fractal operators and
//! price-model simulation from the command line.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input,
//! 3 verification failure.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{FileConfig, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "fracsum", version, about = "Fractal calculus on Cantor-type supports")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// JSON configuration file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fractal support.
    #[arg(long, global = true, value_enum)]
    support: Option<SupportName>,
    /// Dimension override (line support only).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Quadrature panels for the transforms.
    #[arg(long, global = true)]
    panels: Option<usize>,
    /// Relative tail below which the transform integrals are truncated.
    #[arg(long, global = true)]
    truncation_tail: Option<f64>,
    /// Quadrature scheme for the transforms.
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeName>,
    /// Panels for the operator product-integration rules.
    #[arg(long, global = true)]
    operator_panels: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportName {
    Line,
    Cantor,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Trapezoid,
    GaussLaguerre,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the integral staircase S(x).
    Staircase(StaircaseArgs),
    /// Sumudu or Laplace transform of a function expression.
    Transform(TransformArgs),
    /// Apply a fractal integral or derivative to a function expression.
    Operator(OperatorArgs),
    /// Simulate a price-adjustment model.
    Solve(SolveArgs),
    /// Run the built-in verification checks.
    VerifySuite,
}

#[derive(Args, Debug)]
pub struct StaircaseArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindName {
    Sumudu,
    Laplace,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Rule,
    Numeric,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Function expression, e.g. `exp(-1)` or `const - ml(0.5, 2)`.
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, value_enum, default_value_t = KindName::Sumudu)]
    pub kind: KindName,
    #[arg(long, value_enum, default_value_t = ModeName::Rule)]
    pub mode: ModeName,
    /// Comma-separated transform variables v.
    #[arg(long, value_delimiter = ',')]
    pub v: Vec<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpName {
    /// F-derivative d/dS.
    Local,
    /// Fractal integral from 0 to x.
    Integral,
    RlIntegral,
    RlDerivative,
    Caputo,
    NDerivative,
    Wsk,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, value_enum)]
    pub op: OpName,
    /// Operator order (β or γ).
    #[arg(long)]
    pub order: Option<f64>,
    /// Normalization N(γ) of the wsk derivative.
    #[arg(long, default_value_t = 1.0)]
    pub n_gamma: f64,
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
}

#[derive(Args, Debug, Default)]
pub struct SolveArgs {
    /// caputo, caputo-exp, wsk or wsk-exp.
    pub model: String,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub n_gamma: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Number of intervals in the output time grid.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Check the transform residual and compare with a forward solve.
    #[arg(long)]
    pub verify: bool,
    /// Use the closed forms exactly as originally printed.
    #[arg(long)]
    pub as_printed: bool,
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Numeric(String),
    Invalid(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Numeric(m) | CliError::Invalid(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<fracsum::Error> for CliError {
    fn from(e: fracsum::Error) -> Self {
        match e {
            fracsum::Error::NoConvergence(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// What a command produced: the main output plus an optional deferred
/// failure (verification problems still emit their data first).
pub struct Outcome {
    pub body: Vec<u8>,
    pub failure: Option<CliError>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let run_cfg = RunConfig::resolve(&cli.global, &file)?;
    let outcome = match cli.command {
        Command::Staircase(a) => commands::staircase(&run_cfg, &a)?,
        Command::Transform(a) => commands::transform(&run_cfg, &a)?,
        Command::Operator(a) => commands::operator(&run_cfg, &a)?,
        Command::Solve(a) => commands::solve(&run_cfg, &file, &a)?,
        Command::VerifySuite => commands::verify_suite(&run_cfg)?,
    };
    match &run_cfg.out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            f.write_all(&outcome.body)
                .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        }
        None => {
            let mut out = io::stdout().lock();
            // a closed pipe is not worth an error message
            let _ = out.write_all(&outcome.body).and_then(|_| out.flush());
        }
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracsum: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
