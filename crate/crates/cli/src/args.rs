use std::path::PathBuf;
use std::str::FromStr;

use aspectprobe_core::corpus::Format;
use aspectprobe_core::strategies::{KPolicy, StrategyTag};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "aspectprobe", version, about = "Aspect-robustness probes for ABSA test sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Write an enriched test set, skip report, aspect set and manifest.
    Generate(GenerateArgs),
    /// Corpus statistics of an original and/or enriched set.
    Stats(StatsArgs),
    /// Score prediction files against an enriched set.
    Evaluate(EvaluateArgs),
    /// Write a review sheet for an enriched set.
    ReviewExport(ReviewExportArgs),
    /// Apply a filled review sheet and report acceptance rates.
    ReviewImport(ReviewImportArgs),
    /// Accuracy by number of appended AddDiff expressions.
    Sweep(SweepArgs),
}

/// A corpus file with optional opinion annotations.
#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Opinion-span TSV attached to `--input`.
    #[arg(long)]
    pub opinions: Option<PathBuf>,
    /// Corpus format; inferred from the extension when absent.
    #[arg(long)]
    pub format: Option<FormatArg>,
    #[arg(long, default_value = "unknown")]
    pub domain: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatArg(pub Format);

impl FromStr for FormatArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(FormatArg)
    }
}

/// `uniform` (1 to 3 per instance) or a fixed k in 1..=16.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KArg(pub KPolicy);

pub const MAX_K: usize = 16;

impl FromStr for KArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "uniform" {
            return Ok(KArg(KPolicy::default()));
        }
        match s.parse::<usize>() {
            Ok(k) if (1..=MAX_K).contains(&k) => Ok(KArg(KPolicy::Fixed(k))),
            _ => Err(format!("k must be `uniform` or an integer in 1..={MAX_K}, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Args)]
#[group(id = "antonyms", required = true, multiple = false)]
pub struct LexiconArgs {
    /// WordNet database directory (data.* / index.* / *.exc).
    #[arg(long, group = "antonyms")]
    pub wordnet: Option<PathBuf>,
    /// Antonym TSV: `word<TAB>pos<TAB>antonym`.
    #[arg(long = "antonyms-tsv", group = "antonyms")]
    pub antonyms_tsv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    /// Training split: antonym vocabulary, degree adverbs and extra
    /// aspect expressions come from it.
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long = "train-opinions")]
    pub train_opinions: Option<PathBuf>,
    /// Degree-adverb TSV overriding the mined inventory.
    #[arg(long)]
    pub adverbs: Option<PathBuf>,
    /// Aspect-expression TSV overriding the built pool.
    #[arg(long = "aspect-set")]
    pub aspect_set: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated subset of revtgt, revnon, adddiff, revnon_adddiff.
    #[arg(long, default_value = "revtgt,revnon,adddiff", value_delimiter = ',')]
    pub strategies: Vec<StrategyTag>,
    #[arg(long, default_value = "uniform")]
    pub k: KArg,
    /// Worker threads; does not affect the output.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long = "out-dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Original corpus file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub opinions: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<FormatArg>,
    /// Enriched JSONL written by `generate`.
    #[arg(long)]
    pub enriched: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Enriched JSONL with gold labels.
    #[arg(long)]
    pub gold: PathBuf,
    /// Prediction TSV, one per model; the file stem names the model.
    #[arg(long = "predictions", required = true)]
    pub predictions: Vec<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Also write report.txt and report.json here.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReviewExportArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReviewImportArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub review: PathBuf,
    /// A second annotator's sheet; adds agreement figures.
    #[arg(long = "second-review")]
    pub second_review: Option<PathBuf>,
    #[arg(long = "out-dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Enriched JSONL files, paired in order with `--predictions`.
    #[arg(long, required = true)]
    pub gold: Vec<PathBuf>,
    #[arg(long = "predictions", required = true)]
    pub predictions: Vec<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
