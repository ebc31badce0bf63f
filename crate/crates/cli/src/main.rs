//! `blockineq`: verification corpus, witness inspection, sharpness probes and
//! extremal search for block-matrix inequalities.
//!
//! Exit codes: 0 all pass, 1 an inequality failed, 2 usage or input error,
//! 3 a proved bound was exceeded during search.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BREACH: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "blockineq", version, about = "Witnesses and checks for PSD block-matrix inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol_rel: f64,
    /// Absolute tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_abs: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the seeded random corpus through every check.
    Verify {
        /// Dimensions: `2..4`, `1,3,5` or `3`.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// all, theorem, corollaries, norms or gram.
        #[arg(long, default_value = "all")]
        suite: String,
        /// JSON report path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one CSV row per inequality instance.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Build and certify the witnesses for a block file.
    Witness {
        /// Block JSON `{"A": .., "X": .., "B": ..}`.
        #[arg(long)]
        block: PathBuf,
        /// plus, schur or minus.
        #[arg(long, default_value = "plus")]
        op: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate an extremal family.
    Probe {
        /// niceex, schur, dominance, normal-schur, referee or projection.
        #[arg(long)]
        family: String,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        t_steps: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded (1+1) search for near-extremal configurations.
    Search {
        /// triangle, theorem_plus or theorem_schur.
        #[arg(long, default_value = "triangle")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long, default_value_t = blockineq::extremal::search::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = blockineq::extremal::search::DEFAULT_STEP_INIT)]
        step_init: f64,
        #[arg(long, default_value_t = blockineq::extremal::search::DEFAULT_STEP_DECAY)]
        step_decay: f64,
        /// `referee`, or a JSON array of matrices for restart 0.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the Gram block of a factor-list file.
    Gram {
        /// Factor-list JSON `{"pairs": [{"A": .., "B": ..}, ..]}`.
        #[arg(long)]
        factors: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = match cli.command {
        Command::Verify {
            dims,
            trials,
            seed,
            suite,
            out,
            csv,
            tol,
        } => commands::verify(argv, &dims, trials, seed, &suite, out, csv, &tol),
        Command::Witness { block, op, out, tol } => commands::witness(argv, &block, &op, out, &tol),
        Command::Probe {
            family,
            t_min,
            t_max,
            t_steps,
            out,
        } => commands::probe(argv, &family, t_min, t_max, t_steps, out),
        Command::Search {
            kind,
            k,
            n,
            budget,
            restarts,
            seed,
            step_init,
            step_decay,
            start,
            out,
        } => commands::search(
            argv,
            commands::SearchArgs {
                kind,
                k,
                n,
                budget,
                restarts,
                seed,
                step_init,
                step_decay,
                start,
            },
            out,
        ),
        Command::Gram { factors, out, tol } => commands::gram(argv, &factors, out, &tol),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
