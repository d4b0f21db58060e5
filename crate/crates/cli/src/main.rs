//! `tempo`: command-line frontend for the temporal exploration solvers.
//!
//! Exit codes: 0 yes or success, 1 no, 2 input error, 3 resource guard.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempo_core::gen::Family;

#[derive(Parser, Debug)]
#[command(name = "tempo", version, about = "Temporal graph exploration solvers")]
pub struct Cli {
    /// Warn on stderr when an instance's lifetime exceeds this.
    #[arg(long, global = true, default_value_t = 1_000_000, value_name = "T")]
    pub warn_lifetime: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct Guards {
    /// Largest edge bag the Euler program will handle.
    #[arg(long, default_value_t = tempo_core::euler::DEFAULT_MAX_WIDTH)]
    pub max_width: usize,
    /// Largest layer the Euler program will build.
    #[arg(long, default_value_t = tempo_core::euler::DEFAULT_MAX_STATES)]
    pub max_states: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    #[value(name = "3col-star")]
    ColStar,
    StarEuler,
    StarDoublestar,
    CliqueMrd,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bag sizes where they change, and the width.
    Width {
        file: PathBuf,
        /// Vertex bags instead of edge bags.
        #[arg(long)]
        vertex: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Decide whether a temporal Euler circuit exists.
    Euler {
        file: PathBuf,
        #[arg(long)]
        witness: bool,
        /// Certify "no" from the width bound first; with no values, k and u
        /// are measured on the instance.
        #[arg(long, num_args = 0..=2, value_names = ["K", "U"])]
        winwin: Option<Vec<u64>>,
        /// Per-layer table: states, bag size, distinct end vertices.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        guards: Guards,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Decide whether a temporal star can be explored.
    Starexp {
        file: PathBuf,
        #[arg(long)]
        witness: bool,
        /// Certify "no" from the gap bound first; ℓ and u default to the
        /// measured gaps.
        #[arg(long, num_args = 0..=2, value_names = ["L", "U"])]
        winwin: Option<Vec<u64>>,
        /// Use the exhaustive search instead of the dynamic program.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        guards: Guards,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Minimum time-edge deletions bounding temporal reachability.
    Mrd {
        file: PathBuf,
        /// Deletion budget; overrides `param k` in the file.
        #[arg(long)]
        k: Option<u64>,
        /// Reachability budget; overrides `param h` in the file.
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        witness: bool,
        /// Use exhaustive subset enumeration instead of the dynamic program.
        #[arg(long)]
        oracle: bool,
        /// Keep dominated states.
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Build the image of a hardness construction.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        /// Clique size for clique-mrd.
        #[arg(short, long)]
        r: Option<usize>,
        /// Write here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        /// Most times per edge.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Smallest gap (gap-bounded stars).
        #[arg(long, default_value_t = 1)]
        l: u64,
        /// Largest gap (gap-bounded stars).
        #[arg(long, default_value_t = 3)]
        u: u64,
        #[arg(long, default_value_t = 20)]
        lifetime: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the exact solver over a suite and tabulate widths and timings.
    Bench {
        /// Instance files, or directories whose files are taken in name order.
        inputs: Vec<PathBuf>,
        /// Worker threads; output order follows input order regardless.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        guards: Guards,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

/// How a command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
}

/// Why a command could not answer.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Guard(anyhow::Error),
}

impl Failure {
    pub fn input(e: impl Into<anyhow::Error>) -> Self {
        Failure::Input(e.into())
    }

    pub fn guard(e: impl Into<anyhow::Error>) -> Self {
        Failure::Guard(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(e)) => {
            eprintln!("resource guard: {e:#}");
            ExitCode::from(3)
        }
    }
}
