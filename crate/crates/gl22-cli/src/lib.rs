//! Command-line driver for the gl22 verification library: verification
//! suites with JSON reports, coefficient and matrix dumps, parameter sweeps
//! and the degeneration graph.

pub mod args;
pub mod commands;
pub mod report;
pub mod suites;

use std::path::PathBuf;

use gl22::limits::LimitFamily;
use gl22::numeric::{Tolerance, C64, ONE};
use thiserror::Error;

pub use args::{parse_complex, Cli, Command, Format, SuiteName};
pub use report::{Check, Comparison, Report, SuiteResult};

/// Name of the environment variable that overrides the worker-thread count.
pub const THREADS_ENV: &str = "GL22_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Library(#[from] gl22::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Coeffs,
    Dump,
    Sweep,
    Graph,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub h: Option<C64>,
    pub alpha: Option<C64>,
    pub sites: Vec<(C64, C64)>,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub samples: usize,
    pub levels: i32,
    pub suites: Vec<SuiteName>,
    pub family: Option<LimitFamily>,
    pub generator: Option<String>,
    pub level: i32,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub dot: bool,
}

/// What a command produced: the text to write and whether every asserted
/// check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn sites(xs: &[C64], gammas: &[C64]) -> CliResult<Vec<(C64, C64)>> {
    if gammas.len() > xs.len() {
        return Err(CliError::Config("more --gamma than --x values".into()));
    }
    Ok(xs.iter().enumerate().map(|(i, &x)| (x, gammas.get(i).copied().unwrap_or(ONE))).collect())
}

impl RunConfig {
    fn base(command: CommandKind, common: &args::Common) -> CliResult<RunConfig> {
        Ok(RunConfig {
            command,
            h: common.h,
            alpha: common.alpha,
            sites: sites(&common.xs, &common.gammas)?,
            tolerance: Tolerance::default(),
            seed: 0,
            samples: 0,
            levels: 0,
            suites: vec![],
            family: None,
            generator: None,
            level: 0,
            output: common.output.clone(),
            format: common.format,
            dot: false,
        })
    }

    pub fn from_cli(cli: &Cli) -> CliResult<RunConfig> {
        let cfg = match &cli.command {
            Command::Verify(v) => {
                let mut c = RunConfig::base(CommandKind::Verify, &v.common)?;
                if v.tolerance.is_nan() || v.abs_tolerance.is_nan() || v.tolerance <= 0.0 || v.abs_tolerance <= 0.0 {
                    return Err(CliError::Config("tolerances must be positive".into()));
                }
                if v.samples == 0 {
                    return Err(CliError::Config("--samples must be at least 1".into()));
                }
                if !(0..=6).contains(&v.levels) {
                    return Err(CliError::Config("--levels must lie in 0..=6".into()));
                }
                c.tolerance = Tolerance::new(v.tolerance, v.abs_tolerance);
                c.seed = v.seed;
                c.samples = v.samples;
                c.levels = v.levels;
                c.suites = if v.suites.is_empty() {
                    vec![SuiteName::Cybe, SuiteName::Jacobi, SuiteName::Identities, SuiteName::Symmetries, SuiteName::Limits, SuiteName::Affine, SuiteName::Quantum]
                } else {
                    let mut s = v.suites.clone();
                    s.sort();
                    s.dedup();
                    s
                };
                c.family = match &v.family {
                    Some(f) => Some(LimitFamily::from_name(f).ok_or_else(|| CliError::Config(format!("unknown limit family {f:?}")))?),
                    None => None,
                };
                if !c.sites.is_empty() && c.h.is_none() {
                    return Err(CliError::Config("explicit sites need --h".into()));
                }
                c
            }
            Command::Coeffs(p) => {
                let c = RunConfig::base(CommandKind::Coeffs, &p.common)?;
                if c.sites.len() != 2 {
                    return Err(CliError::Config("coeffs needs exactly two --x values".into()));
                }
                c
            }
            Command::Dump(d) => {
                let mut c = RunConfig::base(CommandKind::Dump, &d.common)?;
                c.generator = d.generator.clone();
                c.level = d.level;
                let need = if c.generator.is_some() { 1 } else { 2 };
                if c.sites.len() != need {
                    return Err(CliError::Config(format!("dump needs exactly {need} --x value(s)")));
                }
                c
            }
            Command::Sweep(s) => {
                let mut c = RunConfig::base(CommandKind::Sweep, &s.common)?;
                if s.samples == 0 {
                    return Err(CliError::Config("--samples must be at least 1".into()));
                }
                c.seed = s.seed;
                c.samples = s.samples;
                c.format = Format::Csv;
                c
            }
            Command::Graph(g) => RunConfig {
                command: CommandKind::Graph,
                h: None,
                alpha: None,
                sites: vec![],
                tolerance: Tolerance::default(),
                seed: 0,
                samples: 0,
                levels: 0,
                suites: vec![],
                family: None,
                generator: None,
                level: 0,
                output: g.output.clone(),
                format: Format::Json,
                dot: g.dot,
            },
        };
        Ok(cfg)
    }
}

pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        CommandKind::Verify => {
            let rep = commands::cmd_verify(cfg);
            let text = match cfg.format {
                Format::Json => rep.to_json(),
                Format::Csv => rep.to_csv()?,
            };
            Ok(Outcome { text, pass: rep.pass })
        }
        CommandKind::Coeffs => Ok(Outcome { text: commands::cmd_coeffs(cfg)?, pass: true }),
        CommandKind::Dump => Ok(Outcome { text: commands::cmd_dump(cfg)?, pass: true }),
        CommandKind::Sweep => commands::cmd_sweep(cfg),
        CommandKind::Graph => commands::cmd_graph(cfg),
    }
}

/// Write the outcome where the configuration asks for it.
pub fn emit(cfg: &RunConfig, out: &Outcome) -> CliResult<()> {
    match &cfg.output {
        Some(p) => std::fs::write(p, &out.text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.text.as_bytes())?;
        }
    }
    Ok(())
}

/// Size the global thread pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| CliError::Config(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        if n == 0 {
            return Err(CliError::Config(format!("{THREADS_ENV} must be at least 1")));
        }
        // a pool may already exist when embedded; that is not an error
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
