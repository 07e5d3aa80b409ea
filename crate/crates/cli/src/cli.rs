use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qwmc", version, about = "Weighted model counting and sampling on a simulated quantum computer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weighted model count: exact, quantum (QWMC) and classical estimates.
    Wmc {
        #[command(flatten)]
        common: Common,
        /// Samples for the classical estimator.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Weighted samples over the query variables.
    Sample {
        #[command(flatten)]
        common: Common,
        /// QWMC shots used to estimate the count before each draw.
        #[arg(long, default_value_t = 1)]
        qwmc_shots: u64,
    },
    /// Most probable explanation by repeated sampling and majority vote.
    Mpe {
        #[command(flatten)]
        common: Common,
    },
    /// Maximum a posteriori assignment of the query variables.
    Map {
        #[command(flatten)]
        common: Common,
    },
    /// Model count (weights ignored): exact, quantum counting and classical.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Reproduce the sprinkler histograms and exact report as data files.
    ReproSprinkler {
        /// Directory to write into (created if missing).
        #[arg(long, default_value = "sprinkler-out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        /// Counting bits for the QWMC histogram.
        #[arg(long, default_value_t = 5)]
        t_bits: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print a gate list.
    Circuit {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CircuitKind::WeightedGrover)]
        kind: CircuitKind,
        /// Width for the QFT.
        #[arg(long, default_value_t = 3)]
        t_bits: usize,
    },
    /// Query cost against accuracy for QWMC and the classical estimator (CSV).
    Curve {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Name used in the `instance` column (defaults to the file stem).
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6, 7, 8])]
        t_values: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 100, 1000, 10000])]
        samples: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.01])]
        errors: Vec<f64>,
    },
}

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Args)]
pub struct Common {
    /// Weighted DIMACS file.
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Counting bits for phase estimation (default ⌈n/2⌉+5).
    #[arg(long)]
    pub t_bits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    /// Query variables, 1-based, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub query: Option<Vec<i64>>,
    /// Write the report to `<dir>/<command>.<ext>` instead of stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Quantum,
    Classical,
    All,
}

impl Method {
    pub fn exact(self) -> bool {
        matches!(self, Method::Exact | Method::All)
    }

    pub fn quantum(self) -> bool {
        matches!(self, Method::Quantum | Method::All)
    }

    pub fn classical(self) -> bool {
        matches!(self, Method::Classical | Method::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Tsv => "tsv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    /// Marking oracle over φ' (extra qubit).
    Oracle,
    /// Phase form of the marking oracle.
    PhaseOracle,
    /// Weight-encoding rotation layer.
    Rot,
    /// Weighted Grover iteration.
    WeightedGrover,
    /// Plain Grover iteration over φ.
    Grover,
    Qft,
}
