mod commands;
mod job;
mod output;
mod parse;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use semiflow_core::series::TruncatedSeries;

use parse::SpaceArg;

pub mod exit {
    pub const GENERATES: u8 = 0;
    pub const DOES_NOT_GENERATE: u8 = 1;
    pub const MARGINAL: u8 = 2;
    pub const BOUNDARY_EXIT: u8 = 3;
    pub const USAGE: u8 = 64;
    pub const SOFTWARE: u8 = 70;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] semiflow_core::error::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Compute(_) | Self::Io(_) => exit::SOFTWARE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "semiflow", version, about = "Composition semigroups, generators and their diagnostics on weighted Hardy spaces")]
pub struct Cli {
    /// Read the command from a JSON job file instead of the command line
    #[arg(long, value_name = "FILE")]
    job: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether G generates a semiflow (exit 0 yes, 1 no, 2 marginal)
    Check(CheckArgs),
    /// Berkson–Porta factor F with G(z) = F(z)(ᾱz − 1)(z − α)
    Factor(FactorArgs),
    /// Trajectory of z0 under the semiflow, as CSV (exit 3 if it leaves the disc)
    Flow(FlowArgs),
    /// Denjoy–Wolff point of the semiflow
    Dw(DwArgs),
    /// Finite-section norm of C_{φ_t} against the known bound, or a growth fit
    Norm(NormArgs),
    /// Numerical-range probe sweeps, as CSV
    Nrange(NrangeArgs),
    /// Carathéodory–Toeplitz positivity test of f
    Toeplitz(ToeplitzArgs),
    /// Print seeded sample generators with their verdicts
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GeneratorArg {
    /// Coefficients of G, constant term first, e.g. "0,-1,0.5+0.1i"
    #[arg(short = 'G', long = "generator", value_name = "COEFFS", allow_hyphen_values = true, value_parser = parse::series)]
    pub g: TruncatedSeries,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    #[arg(long, default_value_t = semiflow_core::conditions::DEFAULT_TOL)]
    pub tol: f64,
    /// Radial rings of the condition (B) grid
    #[arg(long, default_value_t = 100)]
    pub radial: usize,
    /// Points per ring of the condition (B) grid
    #[arg(long, default_value_t = 100)]
    pub angular: usize,
    #[arg(long, default_value_t = 0.999)]
    pub r_max: f64,
    /// Boundary maximum for condition (C): certified or sampled
    #[arg(long, default_value = "certified", value_parser = ["certified", "sampled"])]
    pub method: String,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    /// Zero of G to factor out; defaults to the zero of smallest modulus in the closed disc
    #[arg(long, allow_hyphen_values = true, value_parser = parse::complex)]
    pub alpha: Option<Complex64>,
    #[arg(long, default_value_t = semiflow_core::conditions::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    /// Starting point (also accepted as -z0)
    #[arg(long = "z0", allow_hyphen_values = true, value_parser = parse::complex)]
    pub z0: Complex64,
    /// End time
    #[arg(short = 't', long = "t-end", allow_negative_numbers = true)]
    pub t: f64,
    /// Integrate numerically even when a closed form exists
    #[arg(long)]
    pub numeric: bool,
    /// Output times for closed-form flows
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
}

#[derive(Debug, Args)]
pub struct DwArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    #[arg(long, default_value = "hardy", value_parser = parse::space)]
    pub space: SpaceArg,
    /// Flow time
    #[arg(short = 't', long = "time", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Section size N (the section is (N+1)×(N+1))
    #[arg(short = 'N', long = "order", default_value_t = semiflow_core::section::DEFAULT_SECTION_DIM)]
    pub n: usize,
    /// Comma-separated times for a growth-bound fit
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub numeric: bool,
    /// Write the finite section to this file
    #[arg(long, value_name = "FILE")]
    pub section_out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub section_format: String,
}

#[derive(Debug, Args)]
pub struct NrangeArgs {
    #[command(flatten)]
    pub generator: GeneratorArg,
    #[arg(long, value_parser = ["kernel", "fn", "shift"])]
    pub probe: String,
    #[arg(long, value_parser = parse::space)]
    pub space: Option<SpaceArg>,
    /// Kernel probe radii
    #[arg(long, default_value = "0.9,0.99,0.999", value_delimiter = ',')]
    pub radii: Vec<f64>,
    /// Direction of the kernel probe, or the f_N phase; kernel default is the arg max of condition (C)
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Kernel truncation order
    #[arg(short = 'N', long = "order", default_value_t = 2000)]
    pub n: usize,
    /// f_N orders
    #[arg(long, default_value = "8,16,32,64", value_delimiter = ',')]
    pub n_values: Vec<usize>,
    /// f_N exponent: β_n = n^{-alpha_exp}
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_exp: f64,
    /// Seed function of the Dirichlet shift witness
    #[arg(short = 'f', long = "function", allow_hyphen_values = true, value_parser = parse::series)]
    pub f: Option<TruncatedSeries>,
    /// Shift-witness indices k
    #[arg(long, default_value = "0,1,2,4,8,16,32,64", value_delimiter = ',')]
    pub k_values: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ToeplitzArgs {
    /// Coefficients of f, constant term first
    #[arg(short = 'f', long = "function", allow_hyphen_values = true, value_parser = parse::series)]
    pub f: TruncatedSeries,
    /// Largest order k of N_k
    #[arg(short = 'k', long = "k-max", default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = semiflow_core::toeplitz::PSD_REL_TOL)]
    pub tol: f64,
    /// Include the matrices N_k in the report
    #[arg(long)]
    pub matrices: bool,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

fn parse_cli(args: Vec<String>) -> Result<Cli, ExitCode> {
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(cli),
        Err(e) => {
            let _ = e.print();
            Err(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE),
            })
        }
    }
}

fn resolve(cli: Cli, program: &str) -> Result<Command, ExitCode> {
    match (cli.job, cli.command) {
        (Some(_), Some(_)) => {
            eprintln!("semiflow: --job cannot be combined with a subcommand");
            Err(ExitCode::from(exit::USAGE))
        }
        (None, None) => {
            eprintln!("semiflow: a subcommand or --job is required (see --help)");
            Err(ExitCode::from(exit::USAGE))
        }
        (None, Some(command)) => Ok(command),
        (Some(path), None) => {
            let args = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))
                .and_then(|text| job::JobSpec::parse(&text))
                .and_then(|spec| spec.to_args(program));
            let args = match args {
                Ok(a) => a,
                Err(msg) => {
                    eprintln!("semiflow: {msg}");
                    return Err(ExitCode::from(exit::USAGE));
                }
            };
            let cli = parse_cli(parse::normalize_args(args))?;
            match cli.command {
                Some(command) if cli.job.is_none() => Ok(command),
                _ => {
                    eprintln!("semiflow: job file must name a command");
                    Err(ExitCode::from(exit::USAGE))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = match std::env::args_os().map(OsString::into_string).collect() {
        Ok(a) => a,
        Err(_) => {
            eprintln!("semiflow: arguments must be valid UTF-8");
            return ExitCode::from(exit::USAGE);
        }
    };
    let program = args.first().cloned().unwrap_or_else(|| String::from("semiflow"));
    let cli = match parse_cli(parse::normalize_args(args)) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    let command = match resolve(cli, &program) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = commands::run(command, &mut out);
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("semiflow: {e}");
            ExitCode::from(e.code())
        }
    }
}
