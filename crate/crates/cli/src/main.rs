use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

/// Finite relation algebras: axioms, measurability, coset frames and
/// representability.
#[derive(Parser, Debug)]
#[command(name = "cosetra", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Order of the measurable atoms, as atom names or indices.
    #[arg(long, global = true, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Largest atom count checked over every element pair.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=64))]
    threshold: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for reports and produced files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Enumerate element-level checks up to the threshold, ternary laws too.
    #[arg(long, global = true, conflicts_with = "sample")]
    exhaustive: bool,
    /// Sample every element-level check.
    #[arg(long, global = true)]
    sample: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Axiom report for an `.ra` file.
    Check { file: PathBuf },
    /// Measurable atoms, E-classes and the lemma suite.
    Measure { file: PathBuf },
    /// Semi-frame of a measurable algebra, as `.gtr`.
    Extract { file: PathBuf },
    /// Coset algebra of a `.gtr` triple, as `.ra` and `.rel`.
    Build { file: PathBuf },
    /// Extract, rebuild and compare.
    Roundtrip { file: PathBuf },
    /// Decide representability by the scaffold criterion.
    Represent { file: PathBuf },
    /// Complete scaffold search.
    Scaffold { file: PathBuf },
    /// Enumerate group triples and keep those that give relation algebras.
    Gen(GenArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1)]
    indices: usize,
    #[arg(long, default_value_t = 3)]
    max_order: usize,
    /// Restrict to these catalog groups.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<String>>,
    /// Stop after this many triples.
    #[arg(long)]
    limit: Option<usize>,
    /// Randomized descents instead of full enumeration, seeded by `--seed`.
    #[arg(long)]
    attempts: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
