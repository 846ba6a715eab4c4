//! `pseudocone solve|evaluate|bounds|convergence <config.json>`
//!
//! Exit codes: 0 success, 1 malformed input, 2 solver did not converge,
//! 3 internal assertion or failed bound audit.

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Options;
use crate::config::{parse_indices, parse_nest, parse_routes};
use crate::failure::Failure;

#[derive(Parser)]
#[command(name = "pseudocone", version, about = "Weighted cone-volume measures of C-pseudo-cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for a body whose weighted cone-volume measure is the target.
    Solve(Common),
    /// Evaluate the measures of the body given by `target.support`.
    Evaluate(Common),
    /// Audit the cone-volume growth bound on a set of atoms.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Atom indices, comma separated, or `all`.
        #[arg(long)]
        omega: Option<String>,
        /// Also write `bounds_sweep.csv` over sets ordered by boundary distance.
        #[arg(long)]
        sweep: bool,
    },
    /// Solve along nested atom sets and report stabilization.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Levels separated by `;`, e.g. `0,1;0,1,2`.
        #[arg(long)]
        nest: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra routes: `facet,radial,mc` or `all`.
    #[arg(long)]
    routes: Option<String>,
    /// Seed for the solver and Monte Carlo routes.
    #[arg(long)]
    seed: Option<u64>,
    /// Size of the worker pool.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn options(&self) -> Result<Options, Failure> {
        let routes = self.routes.as_deref().map(parse_routes).transpose().map_err(Failure::Input)?;
        Ok(Options { out: self.out.clone(), routes, seed: self.seed, ..Options::default() })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = match &cli.command {
        Command::Solve(c) | Command::Evaluate(c) => c,
        Command::Bounds { common, .. } | Command::Convergence { common, .. } => common,
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot start {n} threads: {e}")))?;
    }
    match &cli.command {
        Command::Solve(c) => commands::solve(&c.config, &c.options()?),
        Command::Evaluate(c) => commands::evaluate_cmd(&c.config, &c.options()?),
        Command::Bounds { common, omega, sweep } => {
            let omega = omega.as_deref().map(parse_indices).transpose().map_err(Failure::Input)?;
            let opts = Options { omega, sweep: *sweep, ..common.options()? };
            commands::bounds(&common.config, &opts)
        }
        Command::Convergence { common, nest } => {
            let nest = nest.as_deref().map(parse_nest).transpose().map_err(Failure::Input)?;
            let opts = Options { nest, ..common.options()? };
            commands::convergence(&common.config, &opts)
        }
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
