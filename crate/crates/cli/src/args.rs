use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use novelty_eval::corpus::GradeMap;
use novelty_eval::harness::AggregationScheme;
use novelty_eval::metrics::{EpsilonPolicy, LogBase};
use novelty_eval::report::OutputFormat;

/// Rank retrieval systems by the novelty of the relevant documents they find,
/// side by side with average precision.
#[derive(Debug, Parser)]
#[command(
    name = "novelty-eval",
    version,
    args_conflicts_with_subcommands = true,
    subcommand_negates_reqs = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic corpus (runs/ and qrels.txt) with controlled overlap.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartialRelevant {
    Exclude,
    Include,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Run file, or directory whose regular files are all run files.
    #[arg(long, value_name = "PATH", required = true)]
    pub runs: Option<PathBuf>,

    /// Relevance judgments (query iter doc grade).
    #[arg(long, value_name = "PATH", required = true)]
    pub qrels: Option<PathBuf>,

    /// Optional SGML topic file; validated and recorded in the report metadata.
    #[arg(long, value_name = "PATH")]
    pub topics: Option<PathBuf>,

    /// Evaluation depth N.
    #[arg(long, default_value_t = 300)]
    pub depth: u32,

    #[arg(long, value_enum, default_value_t = PartialRelevant::Exclude)]
    pub partial_relevant: PartialRelevant,

    /// How per-query utilities are combined (AP is always a mean).
    #[arg(long, default_value_t = AggregationScheme::Sum)]
    pub agg: AggregationScheme,

    #[arg(long, default_value = "e", value_parser = ["e", "2", "10"])]
    pub log_base: String,

    /// `default` (ε = 1/(2N)) or `custom:<float>`.
    #[arg(long, default_value_t = EpsilonPolicy::HalfMinimumMass)]
    pub epsilon_policy: EpsilonPolicy,

    #[arg(long, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Also emit the per-query rank difference matrix.
    #[arg(long)]
    pub per_query: bool,

    /// Output file (default: standard output).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Grade value mapping, e.g. `r=2,p=1,i=0`.
    #[arg(long, default_value = "r=2,p=1,i=0")]
    pub grade_map: GradeMap,

    /// Reject runs whose scores rise as rank increases.
    #[arg(long)]
    pub strict_scores: bool,
}

impl EvalArgs {
    pub fn log_base(&self) -> LogBase {
        self.log_base.parse().expect("restricted by value_parser")
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Directory to write the corpus into (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    #[arg(long, default_value_t = 5)]
    pub systems: usize,

    #[arg(long, default_value_t = 10)]
    pub queries: usize,

    #[arg(long, default_value_t = 100)]
    pub depth: u32,

    /// Relevant documents per query.
    #[arg(long, default_value_t = 20)]
    pub relevant: usize,

    /// Fraction of relevant documents every system retrieves.
    #[arg(long, default_value_t = 0.5)]
    pub shared_fraction: f64,

    /// Relevant documents retrieved by a single designated system.
    #[arg(long, default_value_t = 1)]
    pub unique: usize,

    /// Number of systems that get unique documents (default: all).
    #[arg(long)]
    pub novel_systems: Option<usize>,

    /// Filler documents ranked above the relevant ones in novel systems' runs.
    #[arg(long, default_value_t = 0)]
    pub novel_lead: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
