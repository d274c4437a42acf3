use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gl22::numeric::C64;

/// "re,im" or a bare real number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("invalid number {p:?} in {s:?}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected \"re,im\", got {s:?}")),
    };
    if !z.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

#[derive(Debug, Parser)]
#[command(name = "gl22", version, about = "Verify the trigonometric gl(2|2) classical r-matrix")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write a JSON report
    Verify(VerifyArgs),
    /// Print the ten coefficients A…L at one pair of sites
    Coeffs(PointArgs),
    /// Write the 16×16 r-matrix, or one represented generator, as JSON
    Dump(DumpArgs),
    /// Evaluate residuals at random points and write a CSV table
    Sweep(SweepArgs),
    /// Print the degeneration graph of the limits
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum SuiteName {
    Cybe,
    Jacobi,
    Identities,
    Symmetries,
    Limits,
    Affine,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Deformation parameter h ("re,im"); random per sample if omitted
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub h: Option<C64>,
    /// Global parameter α ("re,im")
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub alpha: Option<C64>,
    /// Site variable x, repeatable ("re,im")
    #[arg(long = "x", allow_hyphen_values = true, value_parser = parse_complex)]
    pub xs: Vec<C64>,
    /// Site normalisation γ, repeatable, paired with --x (default 1)
    #[arg(long = "gamma", allow_hyphen_values = true, value_parser = parse_complex)]
    pub gammas: Vec<C64>,
    /// Output file (stdout if omitted)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suites to run (all if omitted)
    #[arg(long = "suite", value_enum)]
    pub suites: Vec<SuiteName>,
    /// Restrict the limits suite to one family
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random parameter points per suite
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Relative tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Absolute tolerance floor
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tolerance: f64,
    /// Loop levels [−n, n] covered by the Jacobi sweep
    #[arg(long, default_value_t = 1)]
    pub levels: i32,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dump a represented generator (e.g. R12, Q21, A) at the first site instead
    #[arg(long)]
    pub generator: Option<String>,
    /// Loop level of the generator
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub level: i32,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Emit Graphviz DOT instead of JSON
    #[arg(long)]
    pub dot: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
