//! `mbin`: fit source models, compute Chernoff information, simulate contigs,
//! bin them and run error-rate experiments. Every command writes its outputs
//! and a `manifest.json` into `--out`.

mod commands;
mod experiment;
mod failure;
mod fasta;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use markov_binning::binning::{CliqueSearch, Metric};
use markov_binning::hypotest::Estimator;

#[derive(Parser)]
#[command(name = "mbin", version, about = "Binning of Markov-generated sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one stationary model per FASTA file.
    Fit(FitArgs),
    /// Pairwise Chernoff information and the resolvability threshold.
    Chernoff(ChernoffArgs),
    /// Generate labeled contigs from models or genomes.
    Simulate(SimulateArgs),
    /// Bin contigs by clique search, or assign them to given models.
    Bin(BinArgs),
    /// Error-rate experiments over pairs of models.
    Experiment(ExperimentArgs),
}

#[derive(Args, Serialize)]
pub struct FitArgs {
    #[arg(required = true)]
    pub fasta: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    /// Added to every (order + 1)-gram count.
    #[arg(long, default_value_t = 0.0)]
    pub pseudocount: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct ChernoffArgs {
    #[arg(required = true)]
    pub models: Vec<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct SimulateArgs {
    /// Model JSON files, one per species.
    #[arg(long, num_args = 1.., conflicts_with = "genomes", required_unless_present = "genomes")]
    pub models: Vec<PathBuf>,
    /// Genome FASTA files, one per species; contigs are substrings.
    #[arg(long, num_args = 1..)]
    pub genomes: Vec<PathBuf>,
    /// Alphabet of genome files.
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    /// Species priors; uniform when omitted.
    #[arg(long, value_delimiter = ',')]
    pub priors: Vec<f64>,
    #[arg(long, conflicts_with = "lbar", required_unless_present = "lbar")]
    pub length: Option<usize>,
    /// Normalized length; `L = round(lbar * log2(n-contigs))`.
    #[arg(long)]
    pub lbar: Option<f64>,
    #[arg(long)]
    pub n_contigs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricArg {
    ConditionalDivergence,
    Euclidean,
    L1,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::ConditionalDivergence => Metric::ConditionalDivergence,
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::L1 => Metric::L1,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchArg {
    Greedy,
    Exact,
}

impl From<SearchArg> for CliqueSearch {
    fn from(s: SearchArg) -> Self {
        match s {
            SearchArg::Greedy => CliqueSearch::Greedy,
            SearchArg::Exact => CliqueSearch::Exact,
        }
    }
}

#[derive(Args, Serialize)]
pub struct BinArgs {
    pub contigs: PathBuf,
    /// Number of bins M.
    #[arg(long)]
    pub bins: usize,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    /// Clique-size slack; defaults to 1 / log2 of the mean contig length.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value = "conditional-divergence")]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value = "greedy")]
    pub search: SearchArg,
    /// Skip clique search and assign contigs to these models.
    #[arg(long, num_args = 1..)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Exponent,
    L5pct,
    MetricCompare,
    Sanov,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorArg {
    Tilted,
    Plain,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Tilted => Estimator::Tilted,
            EstimatorArg::Plain => Estimator::Plain,
        }
    }
}

#[derive(Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    /// Model JSON files; every unordered pair is used. For `sanov` the first
    /// file is the source and the optional second the ball center.
    #[arg(long, num_args = 1..)]
    pub models: Vec<PathBuf>,
    /// Draw this many random model pairs instead of reading files.
    #[arg(long)]
    pub random_pairs: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Alphabet of random models.
    #[arg(long, default_value = "01")]
    pub alphabet: String,
    /// Smallest transition probability of random models.
    #[arg(long, default_value_t = 0.05)]
    pub floor: f64,
    /// Random pairs with smaller Chernoff information are redrawn.
    #[arg(long, default_value_t = 0.02)]
    pub min_chernoff: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Contig lengths (exponent, sanov).
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    /// Normalized lengths in units of 1 / C (metric-compare).
    #[arg(long, value_delimiter = ',')]
    pub lbar: Vec<f64>,
    /// Community size N used for `lbar = L / log2 N`.
    #[arg(long, default_value_t = 1_000_000)]
    pub n_contigs: usize,
    /// Target Bayes error (l5pct).
    #[arg(long, default_value_t = 0.05)]
    pub target: f64,
    /// Ball diameters (sanov).
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long, value_enum, default_value = "tilted")]
    pub estimator: EstimatorArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Chernoff(a) => commands::chernoff(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Bin(a) => commands::bin(a),
        Command::Experiment(a) => experiment::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mbin: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
