mod commands;
mod error;
mod parse;
mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::{CliError, CliResult};
use parse::{Grid, Real};
use std::path::PathBuf;
use table::Table;

#[derive(Parser, Debug)]
#[command(name = "cginibre", version, about = "Planar Coulomb gas with a point charge: tables and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent rows (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regime, conformal-map data and droplet boundary.
    Geometry(GeometryArgs),
    /// Large-N expansion of log Z_N, optionally against the exact value.
    FreeEnergy(FreeEnergyArgs),
    /// Exact finite-N partition function and orthogonal polynomial.
    Exact(ExactArgs),
    /// Check the LUE gap / partition function duality.
    DualityCheck(DualityArgs),
    /// Hastings-McLeod solution and the Tracy-Widom distribution.
    Tw(TwArgs),
    /// Critical-window expansion of log Z_N.
    Critical(CriticalArgs),
    /// LUE smallest-eigenvalue large deviations.
    Ldp(LdpArgs),
    /// Exact orthogonal polynomial against its large-N asymptotics.
    OpCompare(OpArgs),
    /// Run the acceptance suite.
    Report(ReportArgs),
}

fn real(s: &str) -> Result<Real, String> {
    parse::real(s)
}

fn grid(s: &str) -> Result<Grid, String> {
    parse::grid(s)
}

fn complex(s: &str) -> Result<num_complex::Complex64, String> {
    parse::complex(s)
}

#[derive(Args, Debug)]
pub struct GeometryArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub a: Real,
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub c: Real,
    /// Boundary points per component.
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Tie tolerance for the regime classification.
    #[arg(long, default_value_t = cginibre::geometry::TAU)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct FreeEnergyArgs {
    /// Single a; use --grid for a range.
    #[arg(long, allow_hyphen_values = true, value_parser = real, required_unless_present = "grid")]
    pub a: Option<Real>,
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub c: Real,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    pub n: Vec<u64>,
    /// Range of a as lo:hi:steps.
    #[arg(long, allow_hyphen_values = true, value_parser = grid)]
    pub grid: Option<Grid>,
    /// Bernoulli pairs kept in the tail.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Also compute exact log Z_N (needs cN integral).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 512)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub n: usize,
    /// Charge m; alternatively give --c with cN integral.
    #[arg(long, required_unless_present = "c")]
    pub m: Option<usize>,
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub c: Option<Real>,
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub a: Real,
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct DualityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "0,0.3,0.7,1.1")]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    #[arg(long, default_value_t = 1e-25)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct TwArgs {
    /// Points t as lo:hi:steps.
    #[arg(long, allow_hyphen_values = true, value_parser = grid, default_value = "-8:6:57")]
    pub grid: Grid,
    /// Single t; overrides --grid.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub c: Real,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    pub n: Vec<u64>,
    /// Single s; use --grid for a range.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = grid)]
    pub grid: Option<Grid>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Also compute exact log Z_N at the critical a (needs cN integral).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 512)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct LdpArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub alpha: Real,
    /// Points t as lo:hi:steps; defaults to 50 points on [lambda_- + 0.05, lambda_- + 5].
    #[arg(long, allow_hyphen_values = true, value_parser = grid)]
    pub grid: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Add the asymptotic log-probability at this n.
    #[arg(long)]
    pub n: Option<u64>,
    /// Also compute the exact log-probability (needs alpha n integral).
    #[arg(long)]
    pub exact: bool,
    /// Check Phi = S(t) - S(lambda_-) at every point; exit 3 on violation.
    #[arg(long)]
    pub check_kc: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct OpArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub a: Real,
    #[arg(long, allow_hyphen_values = true, value_parser = real)]
    pub c: Real,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    pub n: Vec<usize>,
    /// Evaluation point as re or re,im.
    #[arg(long, allow_hyphen_values = true, value_parser = complex, default_value = "3")]
    pub x: num_complex::Complex64,
    #[arg(long, default_value_t = 768)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Criterion ids or groups to leave out (exact, free-energy, ldp, tw, op).
    #[arg(long, value_delimiter = ',')]
    pub skip: Vec<String>,
    /// Include wall-clock timings (makes the output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

fn emit(table: &Table, cli: &Cli) -> CliResult<()> {
    let mut buf = Vec::new();
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &table.to_json()).expect("in-memory JSON");
            buf.push(b'\n');
        }
        Format::Csv => table.write_csv(&mut buf)?,
    }
    match &cli.out {
        Some(p) => std::fs::write(p, &buf)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&buf)?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set --jobs: {e}")))?;
    }
    let out = match &cli.command {
        Command::Geometry(a) => commands::geometry(a),
        Command::FreeEnergy(a) => commands::free_energy(a),
        Command::Exact(a) => commands::exact(a),
        Command::DualityCheck(a) => commands::duality(a),
        Command::Tw(a) => commands::tw(a),
        Command::Critical(a) => commands::critical(a),
        Command::Ldp(a) => commands::ldp(a),
        Command::OpCompare(a) => commands::op_compare(a),
        Command::Report(a) => commands::report(a),
    }?;
    emit(&out.table, cli)?;
    match out.failure {
        Some(msg) => Err(CliError::Identity(msg)),
        None => Ok(()),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            std::process::exit(err.exit_code());
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
