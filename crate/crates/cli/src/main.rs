//! `nonabcoh`: batch front end for the constructions in the core crate.
//!
//! Every command reads JSON inputs and writes one JSON report. Exit status
//! is 0 when every check in the report passed, 1 on a failed check or a
//! domain error, and 2 on unreadable or malformed input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nonabcoh", version, about = "Flat bundles in Betti, Čech, lattice and Fuchsian form")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Numerical tolerance (ignored by exact computations).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Arithmetic for matrix-valued inputs.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientsArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Representations of finitely presented groups.
    #[command(subcommand)]
    Betti(BettiCmd),
    /// Čech cohomology of a cover nerve.
    #[command(subcommand)]
    Cech(CechCmd),
    /// Nonabelian 1-cocycles (local systems) on a nerve.
    #[command(subcommand)]
    Localsys(LocalsysCmd),
    /// Discrete connections on triangulated surfaces.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Fuchsian systems with poles at 0, 1 and ∞.
    #[command(subcommand)]
    Fuchsian(FuchsianCmd),
    /// Round trips between the descriptions.
    #[command(subcommand)]
    Equiv(EquivCmd),
}

#[derive(Debug, Subcommand)]
pub enum BettiCmd {
    /// Check that the images satisfy every relator.
    Check { rep: PathBuf },
    /// Traces of the representation on a word list.
    Traces {
        rep: PathBuf,
        /// JSON list of words; defaults to the standard word list.
        #[arg(long)]
        words: Option<PathBuf>,
    },
    /// Reductivity verdict with an invariant-line witness.
    Reductivity { rep: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CechCmd {
    /// Cohomology ranks, torsion and representatives in every degree.
    Cohomology {
        nerve: PathBuf,
        #[arg(long, value_enum, default_value_t = CoefficientsArg::Z)]
        coefficients: CoefficientsArg,
    },
    /// Chern class of a ℂ^× 1-cocycle.
    Chern { nerve: PathBuf, cochain: PathBuf },
    /// Abelian moduli coordinates of a ℂ 1-cocycle or a liftable ℂ^× 1-cocycle.
    Moduli { nerve: PathBuf, cochain: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum LocalsysCmd {
    /// Check the cocycle condition on every triangle.
    Validate { nerve: PathBuf, cocycle: PathBuf },
    /// Apply a gauge transformation.
    Gauge { nerve: PathBuf, cocycle: PathBuf, gauge: PathBuf },
    /// Monodromy representation of the edge-path group.
    Monodromy {
        nerve: PathBuf,
        cocycle: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        /// JSON list of words to take traces on.
        #[arg(long)]
        words: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Curvature on every face.
    Curvature { surface: PathBuf, connection: PathBuf },
    /// Holonomy along a vertex path such as `0,1,2,0`.
    Holonomy {
        surface: PathBuf,
        connection: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<usize>,
    },
    /// Rank-1 moduli coordinates of a flat connection.
    Moduli { surface: PathBuf, connection: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct LoopArgs {
    /// Basepoint, as a JSON scalar.
    #[arg(long, default_value = "-0.25", allow_hyphen_values = true)]
    pub base: String,
    /// Radius of the small loops around 0 and 1.
    #[arg(long, default_value_t = 0.25)]
    pub radius: f64,
}

#[derive(Debug, Subcommand)]
pub enum FuchsianCmd {
    /// Local monodromies with product and eigenvalue checks.
    Monodromy {
        system: PathBuf,
        #[command(flatten)]
        loops: LoopArgs,
    },
    /// Hypergeometric equation as a first-order system.
    Hypergeometric {
        params: PathBuf,
        #[command(flatten)]
        loops: LoopArgs,
    },
    /// λ-connection monodromies against the rescaled system.
    Lambda {
        system: PathBuf,
        /// Values of λ, as JSON scalars.
        #[arg(long = "lambda", required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[command(flatten)]
        loops: LoopArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum EquivCmd {
    /// Representation → cocycle → representation.
    BettiCech { nerve: PathBuf, rep: PathBuf },
    /// Čech, lattice and Betti moduli of a rank-1 cocycle on a surface's nerve.
    CechLattice { surface: PathBuf, cochain: PathBuf },
    /// λ-system against the rescaled system.
    Lambda {
        system: PathBuf,
        #[arg(long = "lambda", required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[command(flatten)]
        loops: LoopArgs,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var("NONABCOH_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        // the global pool can only be built once; a second attempt is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match commands::run(&cli) {
        Ok(report) => {
            let text = nonabcoh::io::to_pretty(&report.to_json());
            let written = match &cli.global.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
                Ok(()) if report.passed => ExitCode::SUCCESS,
                Ok(()) => {
                    eprintln!("check failed: see report");
                    ExitCode::from(1)
                }
            }
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
