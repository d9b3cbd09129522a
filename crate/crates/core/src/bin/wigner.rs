use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stationary_wigner::cli::{cmd_solve, cmd_study, cmd_verify, parse_list, Overrides};
use stationary_wigner::{Method, Result};

#[derive(Parser)]
#[command(
    name = "wigner",
    version,
    about = "Stationary Wigner equation solvers with inflow boundary data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (overrides output.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Linear-solver relative tolerance for solve/study, property tolerance for verify.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured system once.
    Solve { config: PathBuf },
    /// Mesh refinement study of the symmetry error.
    Study {
        config: PathBuf,
        /// Comma-separated even mesh sizes, increasing.
        #[arg(long)]
        nx: String,
        /// Comma-separated schemes: upwind1, upwind2, central, oracle.
        #[arg(long)]
        schemes: String,
    },
    /// Run the property checks.
    Verify { config: PathBuf },
}

fn run(cli: Cli) -> Result<bool> {
    let ov = Overrides {
        out: cli.out,
        tol: cli.tol,
    };
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Solve { config } => cmd_solve(&config, &ov, &mut out).map(|_| true),
        Command::Study {
            config,
            nx,
            schemes,
        } => {
            let nx: Vec<usize> = parse_list("--nx", &nx)?;
            let methods: Vec<Method> = parse_list("--schemes", &schemes)?;
            cmd_study(&config, &nx, &methods, &ov, &mut out).map(|_| true)
        }
        Command::Verify { config } => cmd_verify(&config, &ov, &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {e}");
            if matches!(e, stationary_wigner::Error::InvalidArgument(_)) {
                eprintln!("usage: wigner <solve|study|verify> <config> [--nx <list> --schemes <list>] [--out <dir>] [--tol <real>]");
            }
            ExitCode::FAILURE
        }
    }
}
