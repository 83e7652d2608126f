mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heller::adjoint::DEFAULT_MAX_EPS_DIM;

/// Syzygies, stable Hom spaces and adjoints of the Heller operator over
/// small algebras.
#[derive(Debug, Parser)]
#[command(name = "heller", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in algebra (A, B, C1..C8) or path of an algebra JSON file.
    #[arg(long, global = true, default_value = "A")]
    pub algebra: String,
    /// Prime p for built-in algebras (default 3).
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Largest stable Hom dimension searched for ε.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EPS_DIM)]
    pub max_eps_dim: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write the left-adjoint certificate as JSON to this path.
    #[arg(long, global = true)]
    pub emit_certificate: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Twist {
    /// `dim stHom(X_i, ΩX_j)`.
    Left,
    /// `dim stHom(ΩX_i, X_j)`.
    Right,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Catalog label or path of a module JSON file.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub module: Option<String>,
    /// Use a random module built from --seed.
    #[arg(long)]
    pub random: bool,
    /// Dimension bound for --random.
    #[arg(long, default_value_t = 12)]
    pub max_dim: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce every published result for a built-in algebra.
    VerifyPaper,
    /// Syzygy of a module, identified over the catalog.
    Omega(ModuleArgs),
    /// Stable Hom between two modules, or the dimension matrix of the catalog.
    Sthom {
        /// Print the catalog matrix of stable Hom dimensions.
        #[arg(long, conflicts_with = "module")]
        matrix: bool,
        /// With --matrix: twist one side by Ω.
        #[arg(long, requires = "matrix", value_enum)]
        twist: Option<Twist>,
        /// Source and target (label or JSON path), given twice.
        #[arg(long, num_args = 1, action = clap::ArgAction::Append)]
        module: Vec<String>,
    },
    /// Krull–Schmidt decomposition, identified over the catalog.
    Decompose(ModuleArgs),
    /// Search for a left adjoint of Ω over the catalog.
    LeftAdjoint,
    /// Check the dimension obstruction to a right adjoint of Ω.
    RightAdjoint,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global() {
            eprintln!("error: cannot start {j} worker threads: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 2 } else { 3 })
        }
    }
}
