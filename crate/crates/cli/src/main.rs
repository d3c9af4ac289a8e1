//! `flatsym` command-line front end.
//!
//! Exit status: 0 on success, 1 for configuration or validation failures,
//! 2 when a numerical tolerance or invariant check fails.

mod commands;
mod config;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ConfigFile;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<flatsym::Error> for CliError {
    fn from(e: flatsym::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "flatsym", version, about = "Flat symplectic connections from surface metrics")]
struct Cli {
    /// Configuration file with `key = value` lines and `[command]` sections
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a frame field flow
    Flow(FlowArgs),
    /// Solve the Jacobi pair along a Y orbit
    Jacobi(JacobiArgs),
    /// Monte Carlo Crofton length of a segment
    Crofton(CroftonArgs),
    /// Holonomy of the connection around a square loop
    Holonomy(HolonomyArgs),
    /// Exact and quadrature values of c(m, n)
    Cmn(CmnArgs),
    /// Check the generating-function identity
    Genfun(GenfunArgs),
    /// Pairing coefficients under both readings
    Pairing(PairingArgs),
    /// SO reduction data along a fibre
    Reduce(ReduceArgs),
    /// First-order deformation fields of a holomorphic differential
    Deform(DeformArgs),
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// X, Y or Z
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// flow time, negative to flow backwards
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV of samples `t,x,y,phi`
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// half-plane plot of the trajectory with geodesic and Y-curve overlays
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JacobiArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CroftonArgs {
    /// first endpoint `x,y`
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<commands::Pair>,
    /// second endpoint `x,y`
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<commands::Pair>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// lower-left corner of the square loop
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long)]
    pub probes: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// largest accepted displacement
    #[arg(long)]
    pub threshold: Option<f64>,
    /// CSV of per-probe displacements
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CmnArgs {
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub n: Option<i64>,
    /// print the exact value only
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    /// emit the table for 1 <= m + n <= N instead of a single value
    #[arg(long)]
    pub table: Option<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    /// largest degree checked, starting from 1
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PairingArgs {
    /// R1, R2 or both
    #[arg(long)]
    pub reading: Option<String>,
    #[arg(long)]
    pub m_min: Option<i64>,
    #[arg(long)]
    pub m_max: Option<i64>,
    /// also evaluate the coefficient by double quadrature
    #[arg(long)]
    pub numeric: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    /// directory for `pairing_R1.csv` and `pairing_R2.csv`
    #[arg(long)]
    pub golden: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// number of t intervals
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    #[arg(long)]
    pub m: Option<i32>,
    /// polynomial coefficients of a(z) as `re,im;re,im;...`, constant first
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// table of `x,y,phi,t,u,v,w,dC,dK,h` over a fibre grid at (x, y)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    file.validate(commands::KNOWN)?;
    match &cli.command {
        Command::Flow(a) => commands::flow(a, &file.view("flow")),
        Command::Jacobi(a) => commands::jacobi(a, &file.view("jacobi")),
        Command::Crofton(a) => commands::crofton(a, &file.view("crofton")),
        Command::Holonomy(a) => commands::holonomy(a, &file.view("holonomy")),
        Command::Cmn(a) => commands::cmn(a, &file.view("cmn")),
        Command::Genfun(a) => commands::genfun(a, &file.view("genfun")),
        Command::Pairing(a) => commands::pairing(a, &file.view("pairing")),
        Command::Reduce(a) => commands::reduce(a, &file.view("reduce")),
        Command::Deform(a) => commands::deform(a, &file.view("deform")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
