use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use aspectprobe_core::corpus::{Dataset, Split};
use aspectprobe_core::lexicon::{
    build_degree_adverbs, load_tsv_lexicon, load_wordnet, AntonymLexicon, DegreeAdverbLexicon, Vocabulary,
    WHITELIST_VERSION,
};
use aspectprobe_core::strategies::{build_aspect_set, generate_all, write_enriched, AspectSet, GenerateConfig, KPolicy};
use serde::Serialize;
use serde_json::json;

use crate::args::GenerateArgs;
use crate::io::{digest_path, load_corpus, meta, read, read_string, sha256, write_atomic};

pub const ENRICHED: &str = "enriched.jsonl";
pub const SKIPS: &str = "skip_report.tsv";
pub const ASPECT_SET: &str = "aspect_set.tsv";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: serde_json::Value,
    pub config_sha256: String,
    pub inputs: BTreeMap<String, InputDigest>,
    pub outputs: BTreeMap<String, String>,
}

fn k_label(k: KPolicy) -> serde_json::Value {
    match k {
        KPolicy::Uniform { min, max } => json!(format!("uniform_{min}_{max}")),
        KPolicy::Fixed(k) => json!({ "fixed": k }),
    }
}

fn load_lexicon(args: &GenerateArgs) -> Result<(AntonymLexicon, &Path)> {
    if let Some(dir) = &args.lexicon.wordnet {
        return Ok((load_wordnet(dir)?, dir.as_path()));
    }
    let path = args.lexicon.antonyms_tsv.as_deref().expect("clap enforces one lexicon source");
    let lex = load_tsv_lexicon(&read(path)?).with_context(|| format!("{}", path.display()))?;
    Ok((lex, path))
}

pub fn run(args: &GenerateArgs) -> Result<()> {
    let format = args.corpus.format.map(|f| f.0);
    let test = load_corpus(
        &args.corpus.input,
        format,
        args.corpus.opinions.as_deref(),
        &meta(&args.corpus.domain, Split::Test),
    )?;
    let train: Option<Dataset> = args
        .train
        .as_deref()
        .map(|p| load_corpus(p, None, args.train_opinions.as_deref(), &meta(&args.corpus.domain, Split::Train)))
        .transpose()?;

    let (lex, lex_path) = load_lexicon(args)?;
    let lex = lex.with_vocabulary(Vocabulary::from_dataset(train.as_ref().unwrap_or(&test)));

    let (adverbs, adverb_source) = match (&args.adverbs, &train) {
        (Some(p), _) => (
            DegreeAdverbLexicon::from_tsv(&read_string(p)?).with_context(|| format!("{}", p.display()))?,
            "file",
        ),
        (None, Some(t)) => (build_degree_adverbs(t, &lex), "mined"),
        (None, None) => (DegreeAdverbLexicon::whitelist(), "whitelist"),
    };
    let (set, set_source) = match &args.aspect_set {
        Some(p) => (
            AspectSet::from_tsv(&read_string(p)?).with_context(|| format!("{}", p.display()))?,
            "file",
        ),
        None => (build_aspect_set(std::iter::once(&test).chain(train.as_ref()))?, "built"),
    };

    let cfg = GenerateConfig {
        seed: args.seed,
        strategies: args.strategies.iter().copied().collect(),
        k: args.k.0,
        threads: args.threads,
    };
    let (instances, report) = generate_all(&test, &cfg, &lex, &adverbs, &set);

    let enriched = write_enriched(&instances);
    let skips = report.to_tsv();
    let set_tsv = set.to_tsv();

    let config = json!({
        "domain": args.corpus.domain,
        "format": format!("{:?}", crate::io::infer_format(&args.corpus.input, format)).to_lowercase(),
        "strategies": cfg.strategies.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        "k": k_label(cfg.k),
        "lexicon": if args.lexicon.wordnet.is_some() { "wordnet" } else { "antonyms-tsv" },
        "adverbs": adverb_source,
        "adverb_whitelist": WHITELIST_VERSION,
        "aspect_set": set_source,
    });
    let mut inputs = BTreeMap::new();
    let mut add = |role: &str, path: Option<&Path>| -> Result<()> {
        if let Some(p) = path {
            inputs.insert(
                role.to_string(),
                InputDigest {
                    path: p.display().to_string(),
                    sha256: digest_path(p)?,
                },
            );
        }
        Ok(())
    };
    add("input", Some(&args.corpus.input))?;
    add("opinions", args.corpus.opinions.as_deref())?;
    add("lexicon", Some(lex_path))?;
    add("train", args.train.as_deref())?;
    add("train_opinions", args.train_opinions.as_deref())?;
    add("adverbs", args.adverbs.as_deref())?;
    add("aspect_set", args.aspect_set.as_deref())?;

    let outputs: BTreeMap<String, String> = [
        (ENRICHED, sha256(&enriched)),
        (SKIPS, sha256(skips.as_bytes())),
        (ASPECT_SET, sha256(set_tsv.as_bytes())),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "generate",
        seed: args.seed,
        config_sha256: sha256(serde_json::to_string(&(&config, args.seed))?.as_bytes()),
        config,
        inputs,
        outputs,
    };

    let out = &args.out_dir;
    write_atomic(&out.join(ENRICHED), &enriched)?;
    write_atomic(&out.join(SKIPS), skips.as_bytes())?;
    write_atomic(&out.join(ASPECT_SET), set_tsv.as_bytes())?;
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    write_atomic(&out.join(MANIFEST), manifest_json.as_bytes())?;

    eprintln!(
        "{} instances from {} targets ({} skipped)",
        instances.len(),
        test.instance_count(),
        report.records.len()
    );
    Ok(())
}
