use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vcmark_core::markov::CfKind;

#[derive(Debug, Parser)]
#[command(
    name = "vcmark",
    version,
    about = "Vowel/consonant Markov profiling of literary texts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory.
    #[arg(long, global = true, env = "VCMARK_OUT", default_value = "vcmark-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Parse texts into structured corpora, line statistics and stanza alignment.
    Parse(ParseArgs),
    /// Encode texts as V/C sequences with an origin map.
    Encode(EncodeArgs),
    /// Fit per-block models and dispersion statistics.
    Profile(ProfileArgs),
    /// Moving-block-bootstrap distributions of per-block statistics.
    Bootstrap(BootstrapArgs),
    /// Autocorrelation, Ljung-Box tests and bootstrap bands per block.
    Acf(AcfArgs),
    /// Adequacy ensemble of sequences simulated from a fitted block.
    Simulate(SimulateArgs),
    /// Interaction regression of memory depth on block and source.
    Regress(RegressArgs),
    /// Repeat another command with one source replaced by surrogates.
    Surrogate(SurrogateArgs),
    /// Trigram probe scan, ranking, trend screen and categories.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownArg {
    Error,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CfArg {
    Simple,
    Complex,
}

impl From<CfArg> for CfKind {
    fn from(c: CfArg) -> Self {
        match c {
            CfArg::Simple => CfKind::Simple,
            CfArg::Complex => CfKind::Complex,
        }
    }
}

/// Where the sequences come from.
#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Source as ID=PATH. Files ending in `.vc` or `.vc.txt` hold V/C
    /// symbols; anything else is parsed as text.
    #[arg(long = "input", value_name = "ID=PATH", required = true)]
    pub inputs: Vec<String>,

    /// Encoding scheme: a built-in name or JSON path, optionally as ID=SCHEME.
    /// A source whose id is a built-in scheme name uses that scheme by default.
    #[arg(long = "scheme", value_name = "[ID=]SCHEME")]
    pub schemes: Vec<String>,

    /// Layout JSON describing part and stanza headers, optionally as ID=PATH.
    #[arg(long = "layout", value_name = "[ID=]PATH")]
    pub layouts: Vec<String>,

    /// What to do with letters outside the scheme.
    #[arg(long, value_enum, default_value_t = UnknownArg::Skip)]
    pub unknown: UnknownArg,

    /// Encode chapter epigraphs too.
    #[arg(long)]
    pub include_epigraphs: bool,

    /// Keep only the first N stanzas of each text.
    #[arg(long, value_name = "N")]
    pub stanzas: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BlockArgs {
    #[arg(long, default_value_t = 10_000)]
    pub block_len: usize,

    /// Keep a final partial block if it has at least --min-partial symbols.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub keep_partial: bool,

    #[arg(long, default_value_t = 5_000)]
    pub min_partial: usize,

    /// Correction factor behind memory depth.
    #[arg(long, value_enum, default_value_t = CfArg::Complex)]
    pub cf: CfArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResampleArgs {
    #[arg(long, default_value_t = 250)]
    pub subblock_len: usize,

    #[arg(long, default_value_t = 1_000)]
    pub replicates: usize,

    /// Master seed for every random stream.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Confidence level of percentile intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParseArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Minimum length of reported Latin-script tokens.
    #[arg(long, default_value_t = 2)]
    pub latin_min_len: usize,

    /// Count dotted placeholder lines in line statistics.
    #[arg(long)]
    pub include_placeholders: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AcfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,

    /// Largest lag, also the Ljung-Box horizon.
    #[arg(long, default_value_t = 10)]
    pub lags: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,

    /// 1-based block the chain is fitted to.
    #[arg(long, default_value_t = 1)]
    pub block: usize,

    #[arg(long, default_value_t = 500)]
    pub runs: usize,

    /// Length of each simulated sequence; defaults to the block length.
    #[arg(long)]
    pub length: Option<usize>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlSet {
    /// Partial out block index.
    Block,
    /// Plain Spearman correlations.
    None,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegressArgs {
    /// Text or V/C inputs; needed for bootstrap replicates.
    #[arg(long = "input", value_name = "ID=PATH")]
    pub inputs: Vec<String>,
    #[arg(long = "scheme", value_name = "[ID=]SCHEME")]
    pub schemes: Vec<String>,
    #[arg(long = "layout", value_name = "[ID=]PATH")]
    pub layouts: Vec<String>,
    #[arg(long, value_enum, default_value_t = UnknownArg::Skip)]
    pub unknown: UnknownArg,
    #[arg(long)]
    pub include_epigraphs: bool,
    #[arg(long, value_name = "N")]
    pub stanzas: Option<usize>,

    /// A `profile.csv` to fit instead of profiling inputs (point fit only).
    #[arg(long, value_name = "PATH", conflicts_with = "inputs")]
    pub profile: Option<PathBuf>,

    /// The two sources to compare, focal first unless --focal is given.
    #[arg(long, value_delimiter = ',')]
    pub sources: Vec<String>,

    /// Source whose offset and extra slope are estimated.
    #[arg(long)]
    pub focal: Option<String>,

    /// Covariates partialled out of the parameter correlations.
    #[arg(long, value_enum, default_value_t = ControlSet::Block)]
    pub control_set: ControlSet,

    #[command(flatten)]
    pub blocks: BlockArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,
}

impl RegressArgs {
    pub fn input_args(&self) -> InputArgs {
        InputArgs {
            inputs: self.inputs.clone(),
            schemes: self.schemes.clone(),
            layouts: self.layouts.clone(),
            unknown: self.unknown,
            include_epigraphs: self.include_epigraphs,
            stanzas: self.stanzas,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurrogateOf {
    Profile,
    Bootstrap,
    Acf,
    Simulate,
    Regress,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurrogateArgs {
    /// Command to repeat on surrogate data.
    #[arg(long, value_enum)]
    pub of: SurrogateOf,

    /// Source replaced in each run.
    #[arg(long)]
    pub source: String,

    /// Source the surrogates are drawn from; defaults to --source.
    #[arg(long)]
    pub from: Option<String>,

    #[arg(long, default_value_t = 100)]
    pub runs: usize,

    #[arg(long, value_delimiter = ',')]
    pub sources: Vec<String>,
    #[arg(long)]
    pub focal: Option<String>,
    #[arg(long, value_enum, default_value_t = ControlSet::Block)]
    pub control_set: ControlSet,

    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,

    /// Simulation settings used with `--of simulate`.
    #[arg(long, default_value_t = 1)]
    pub block: usize,
    #[arg(long, default_value_t = 500)]
    pub sim_runs: usize,
    #[arg(long, default_value_t = 10)]
    pub lags: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub blocks: BlockArgs,

    /// Source to scan; defaults to the first input.
    #[arg(long)]
    pub source: Option<String>,

    /// Trigram classes to scan.
    #[arg(long, value_delimiter = ',', default_value = "VVV,CCC,VVC,CCV")]
    pub classes: Vec<String>,

    /// Spearman p-value below which a trigram becomes a candidate.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,

    /// Letter trigram(s) whose single-word matches are categorized.
    #[arg(long = "probe", value_delimiter = ',')]
    pub probes: Vec<String>,

    /// CSV of (context, lemma, category).
    #[arg(long)]
    pub annotations: Option<PathBuf>,

    /// CSV of (form, category) applied to lemmas and contexts.
    #[arg(long)]
    pub categories: Option<PathBuf>,

    /// CSV of (character, form) for the co-occurrence report.
    #[arg(long)]
    pub names: Option<PathBuf>,

    /// Categories counted as thematic; defaults to all categories.
    #[arg(long, value_delimiter = ',')]
    pub thematic: Vec<String>,

    /// Categorize multi-word matches as well.
    #[arg(long)]
    pub all_contexts: bool,
}
