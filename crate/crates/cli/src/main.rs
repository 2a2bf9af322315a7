use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ueoc::{WalkConfig, WalkMode};

mod commands;
mod suite;

#[derive(Parser, Debug)]
#[command(
    name = "ueoc",
    version,
    about = "Overlapping community detection with constrained random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect an overlapping cover and write it as a cover file.
    Detect(commands::DetectArgs),
    /// Score a cover: AC, EQ and, given a reference cover, NMI.
    Eval(commands::EvalArgs),
    /// Generate a benchmark graph with its planted cover.
    Generate(commands::GenerateArgs),
    /// Normalised Laplacian spectrum, or a dense l-step transition matrix.
    Spectrum(commands::SpectrumArgs),
    /// Per-step convergence of a single walk.
    Trace(commands::TraceArgs),
    /// Sweep a benchmark family and report mean NMI and timings.
    Suite(suite::SuiteArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Unconstrained,
    Constrained,
    DegreeCorrected,
}

impl From<ModeArg> for WalkMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unconstrained => WalkMode::Unconstrained,
            ModeArg::Constrained => WalkMode::Constrained,
            ModeArg::DegreeCorrected => WalkMode::DegreeCorrected,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct WalkArgs {
    /// Walk length l.
    #[arg(long = "l", default_value_t = ueoc::walk::DEFAULT_STEPS)]
    pub steps: usize,
    /// Stop early once consecutive vectors are closer than this.
    #[arg(long, default_value_t = ueoc::walk::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

impl WalkArgs {
    pub fn config(&self, mode: WalkMode) -> Result<WalkConfig, Failure> {
        if self.steps == 0 {
            return Err(Failure::Usage("--l must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::Usage("--tol must be positive".into()));
        }
        Ok(WalkConfig {
            max_steps: self.steps,
            convergence_tol: self.tol,
            mode,
        })
    }
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<ueoc::Error> for Failure {
    fn from(e: ueoc::Error) -> Self {
        use ueoc::Error as E;
        match e {
            E::InvalidParameter(msg) => Failure::Usage(msg),
            E::Parse { .. }
            | E::EmptyGraph
            | E::UnknownLabel { .. }
            | E::Io(_)
            | E::CoverSizeMismatch { .. }
            | E::IncompleteCover { .. }
            | E::EmptyCover
            | E::NodeOutOfRange { .. }
            | E::Generation(_)
            | E::DenseCapExceeded { .. } => Failure::Data(e.into()),
            other => Failure::Internal(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Data(e.into())
    }
}

/// Adds the offending path to an error.
pub fn at_path<T, E: Into<Failure>>(r: Result<T, E>, path: &std::path::Path) -> Result<T, Failure> {
    r.map_err(|e| match e.into() {
        Failure::Data(err) => Failure::Data(err.context(path.display().to_string())),
        other => other,
    })
}

pub fn output_writer(path: Option<&PathBuf>) -> Result<Box<dyn std::io::Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(at_path(std::fs::File::create(p), p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Detect(a) => commands::detect(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Generate(a) => commands::generate(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Trace(a) => commands::trace(&a),
        Command::Suite(a) => suite::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Data(e) => eprintln!("error: {e:#}"),
                Failure::Internal(e) => eprintln!("internal error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
