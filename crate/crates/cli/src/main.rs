//! `cplab`: validate complexes, check angle data, solve for balanced shears,
//! develop circle patterns, build ideal hulls and render SVG figures.

mod commands;
mod error;
mod output;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cplab", version, about = "Circle patterns on closed surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a complex is a polygonal cell decomposition.
    Validate {
        complex: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Admissibility of angle data on a complex.
    Check {
        complex: PathBuf,
        theta: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve for shears of a balanced metric.
    Solve {
        complex: PathBuf,
        theta: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Start from the shears in this file.
        #[arg(long)]
        warm_start: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Develop a solution and extract its circle pattern.
    Develop {
        complex: PathBuf,
        theta: PathBuf,
        shears: PathBuf,
        /// Also write an SVG figure here.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        view: ViewArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ideal hull of points on the sphere and its circle pattern.
    Hull {
        points: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        view: ViewArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw a pattern file as SVG.
    Render {
        pattern: PathBuf,
        #[command(flatten)]
        view: ViewArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ViewArgs {
    /// Chart point at the middle of the figure, as `re,im`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    center: String,
    /// Pixels per unit.
    #[arg(long, default_value_t = 120.0)]
    scale: f64,
    /// Word length of deck images drawn around the fundamental circles.
    #[arg(long, default_value_t = 0)]
    copies: usize,
}

fn init_threads() {
    if let Some(n) = std::env::var("CPLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { complex, out } => commands::validate(&complex, out.out.as_deref()),
        Command::Check { complex, theta, out } => commands::check(&complex, &theta, out.out.as_deref()),
        Command::Solve { complex, theta, solver, warm_start, out } => {
            let opts = cplab::teich::SolverOptions {
                tol: solver.tol,
                max_iter: solver.max_iter,
                damping: solver.damping,
                seed: solver.seed,
                restarts: solver.restarts,
                ..Default::default()
            };
            commands::solve(&complex, &theta, warm_start.as_deref(), &opts, out.out.as_deref())
        }
        Command::Develop { complex, theta, shears, svg, view, out } => {
            commands::develop(&complex, &theta, &shears, svg.as_deref(), &view, out.out.as_deref())
        }
        Command::Hull { points, svg, view, out } => commands::hull(&points, svg.as_deref(), &view, out.out.as_deref()),
        Command::Render { pattern, view, out } => commands::render(&pattern, &view, out.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cplab: {e}");
            ExitCode::from(e.code())
        }
    }
}
