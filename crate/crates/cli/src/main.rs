//! `bandops` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or other error, 2 invalid
//! spec file or arguments, 3 unsupported operator class or exponent,
//! 4 numerical non-convergence.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use bandops::pseudospec::{EssentialMethod, GridBox};
use bandops::Complex64;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bandops", version, about = "Norms, limit operators, pseudospectra and finite sections of band operators")]
struct Cli {
    /// Worker threads for grid and section work (default: all cores).
    #[arg(long, global = true, env = "BANDOPS_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Operator specification file (JSON).
    pub spec: PathBuf,
    /// Convergence tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Write the CSV output here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm ||A|| (or |||A|||_D with --window).
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Essential norm ||A + K||.
    Essnorm {
        #[command(flatten)]
        common: Common,
    },
    /// Lower norm nu(A - lambda) (or its windowed version with --window).
    Lowernorm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Option<Complex64>,
        #[arg(long)]
        window: Option<usize>,
        /// Lower norm of the adjoint instead.
        #[arg(long)]
        adjoint: bool,
    },
    /// mu(A - lambda) = min(mu~(A - lambda), mu~((A - lambda)*)).
    Mu {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Option<Complex64>,
    },
    /// Operator spectrum with norms and lower norms of each limit operator.
    Limitops {
        #[command(flatten)]
        common: Common,
        /// Write each limit operator as a canonical spec file into this directory.
        #[arg(long)]
        spec_dir: Option<PathBuf>,
    },
    /// Grid of reciprocal (essential) resolvent norms.
    Pseudospec {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", value_parser = parse_box, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        bounds: GridBox,
        #[arg(long, default_value_t = 41)]
        nx: usize,
        #[arg(long, default_value_t = 41)]
        ny: usize,
        #[arg(long)]
        essential: bool,
        /// mu, limitops or both (essential grids only).
        #[arg(long, value_parser = parse_method, requires = "essential")]
        method: Option<EssentialMethod>,
        /// Largest accepted discrepancy between the two methods.
        #[arg(long, default_value_t = 5e-3)]
        agree_tol: f64,
    },
    /// Rank-one perturbation K with ||K|| < eps and lambda in sp(A + K).
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long)]
        eps: f64,
    },
    /// Finite sections, stability spectrum and the limsup identities.
    Finsec {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = bandops::finsec::DEFAULT_NMAX)]
        nmax: usize,
        /// Padding constant (default: ||A||).
        #[arg(long)]
        c: Option<f64>,
    },
    /// Runs the invariant suite on the operator and the block-example battery.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Validates a spec file and prints its canonical form.
    Spec {
        spec: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Writes the operator corpus as spec files.
    Corpus {
        /// Target directory.
        #[arg(long)]
        output: PathBuf,
        /// Seed of the randomized members.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("invalid number '{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're' or 're,im', got '{s}'")),
    }
}

fn parse_box(s: &str) -> Result<GridBox, String> {
    s.parse().map_err(|e: bandops::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<EssentialMethod, String> {
    s.parse().map_err(|e: bandops::Error| e.to_string())
}

/// Why a command did not succeed.
pub enum Failure {
    Lib(bandops::Error),
    NotConverged(String),
    Check(String),
    Usage(String),
    Io(String),
}

impl From<bandops::Error> for Failure {
    fn from(e: bandops::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use bandops::Error as E;
        match self {
            Failure::Lib(E::Json { .. } | E::Spec { .. }) | Failure::Usage(_) => 2,
            Failure::Lib(E::UnsupportedClass(_) | E::UnsupportedExponent(_)) => 3,
            Failure::Lib(E::KernelFailure { .. }) | Failure::NotConverged(_) => 4,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::NotConverged(m) => format!("not converged: {m}"),
            Failure::Check(m) | Failure::Usage(m) => m.clone(),
            Failure::Io(m) => format!("i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let result = match cli.command {
        Command::Norm { common, window } => commands::norm(&common, window),
        Command::Essnorm { common } => commands::essnorm(&common),
        Command::Lowernorm {
            common,
            lambda,
            window,
            adjoint,
        } => commands::lowernorm(&common, lambda, window, adjoint),
        Command::Mu { common, lambda } => commands::mu(&common, lambda),
        Command::Limitops { common, spec_dir } => commands::limitops(&common, spec_dir.as_deref()),
        Command::Pseudospec {
            common,
            bounds,
            nx,
            ny,
            essential,
            method,
            agree_tol,
        } => commands::pseudospec(&common, bounds, nx, ny, essential, method, agree_tol),
        Command::Witness { common, lambda, eps } => commands::witness(&common, lambda, eps),
        Command::Finsec { common, nmax, c } => commands::finsec(&common, nmax, c),
        Command::Verify { common } => verify::run(&common),
        Command::Spec { spec, output } => commands::spec(&spec, output.as_deref()),
        Command::Corpus { output, seed } => commands::corpus(&output, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
