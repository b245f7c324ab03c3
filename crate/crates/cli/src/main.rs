mod commands;
mod render;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "centangle", version, about = "Concentratable entanglement toolkit")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for generated files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Largest qubit count for statevector work, and the upper end of
    /// `reproduce fig3`.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// CE, purities and certification for a state file.
    Ce {
        #[arg(long)]
        state: PathBuf,
        /// Include the full SWAP-test outcome distribution.
        #[arg(long)]
        distribution: bool,
    },
    /// Simulate the parallel SWAP test.
    Swaptest {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        shots: usize,
        /// Where to write the samples; defaults to `<out>/swaptest_samples.txt`.
        #[arg(long)]
        samples: Option<PathBuf>,
    },
    /// Product-structure hierarchy for `n` qubits.
    Hierarchy {
        #[arg(long)]
        n: usize,
    },
    /// Certify entanglement structure from a measured CE.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ce: f64,
        /// Total purity of a mixed state.
        #[arg(long)]
        purity: Option<f64>,
    },
    #[command(subcommand)]
    Lp(LpCommand),
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Haar-random CE statistics.
    Haar {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6000)]
        samples: usize,
        /// Histogram CSV path.
        #[arg(long)]
        hist: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Regenerate a published artifact into the output directory and diff it.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Subcommand, Debug)]
pub enum LpCommand {
    /// Upper bound on maximal CE.
    Cmax {
        #[arg(long)]
        n: usize,
        /// Print as p/q.
        #[arg(long)]
        rational: bool,
    },
    /// Maximum expected Bell-pair count with its dual certificate.
    Bell {
        #[arg(long)]
        n: usize,
    },
    /// Check the coding bounds on an enumerator.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// JSON array `A_0..A_n` of integers or "p/q" strings, or a path to one.
        #[arg(long)]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphCommand {
    /// Exact CE of a graph state.
    Ce {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Search graph states for the largest CE.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 100_000)]
        iters: u64,
        #[arg(long, default_value_t = 4)]
        restarts: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    SmLp,
    SmHierarchies,
    Fig2,
    Fig3,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Mismatch(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch:\n{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
