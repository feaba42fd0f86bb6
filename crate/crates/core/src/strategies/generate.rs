use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::RngExt;
use rayon::prelude::*;

use super::{
    add_diff, eligible_pool_size, instance_id, rev_non, rev_non_add_diff, rev_tgt, AspectSet, GeneratedInstance, Skip,
    StrategyTag,
};
use crate::corpus::{AspectInstance, Dataset, Sentence};
use crate::lexicon::{AntonymLexicon, DegreeAdverbLexicon};
use crate::rng::instance_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPolicy {
    /// Draw k per instance from `min..=max`, lowering it while the pool is
    /// too small.
    Uniform { min: usize, max: usize },
    /// Exactly k; instances whose pool is too small are skipped.
    Fixed(usize),
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy::Uniform { min: 1, max: 3 }
    }
}

#[derive(Debug, Clone)]
pub struct GenerateConfig {
    pub seed: u64,
    pub strategies: BTreeSet<StrategyTag>,
    pub k: KPolicy,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            seed: 0,
            strategies: [StrategyTag::RevTgt, StrategyTag::RevNon, StrategyTag::AddDiff].into(),
            k: KPolicy::default(),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipRecord {
    pub source_id: String,
    pub strategy: StrategyTag,
    pub reason: Skip,
}

/// Attempts, outputs and skips per strategy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SkipReport {
    pub attempted: BTreeMap<StrategyTag, usize>,
    pub emitted: BTreeMap<StrategyTag, usize>,
    pub counts: BTreeMap<(StrategyTag, Skip), usize>,
    pub records: Vec<SkipRecord>,
}

impl SkipReport {
    pub fn is_empty(&self) -> bool {
        self.attempted.is_empty()
    }

    pub fn skipped(&self, strategy: StrategyTag) -> usize {
        self.counts.iter().filter(|((s, _), _)| *s == strategy).map(|(_, n)| n).sum()
    }

    pub fn count(&self, strategy: StrategyTag, reason: Skip) -> usize {
        self.counts.get(&(strategy, reason)).copied().unwrap_or(0)
    }

    /// `strategy<TAB>reason<TAB>count`, one row per observed pair.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("strategy\treason\tcount\n");
        for ((strategy, reason), n) in &self.counts {
            let _ = writeln!(out, "{strategy}\t{}\t{n}", reason.as_str());
        }
        out
    }
}

struct Resources<'a> {
    lex: &'a AntonymLexicon,
    adverbs: &'a DegreeAdverbLexicon,
    set: &'a AspectSet,
}

fn rng_key(strategy: StrategyTag, k: KPolicy) -> String {
    match (strategy.uses_k(), k) {
        (true, KPolicy::Fixed(k)) => format!("{strategy}-k{k}"),
        _ => strategy.to_string(),
    }
}

fn run_one(
    sentence: &Sentence,
    target: &AspectInstance,
    strategy: StrategyTag,
    cfg: &GenerateConfig,
    res: &Resources<'_>,
) -> Result<GeneratedInstance, Skip> {
    let key = rng_key(strategy, cfg.k);
    let mut rng = instance_rng(cfg.seed, &[&sentence.sentence_id, &target.aspect_id, &key]);
    let aid = target.aspect_id.as_str();
    let mut out = match strategy {
        StrategyTag::Source => Ok(GeneratedInstance::source(sentence, target)),
        StrategyTag::RevTgt => rev_tgt(sentence, aid, res.lex, &mut rng),
        StrategyTag::RevNon => rev_non(sentence, aid, res.lex, res.adverbs, &mut rng),
        StrategyTag::AddDiff | StrategyTag::RevNonAddDiff => {
            let k = match cfg.k {
                KPolicy::Fixed(k) => k,
                KPolicy::Uniform { min, max } => {
                    let drawn = rng.random_range(min.max(1)..=max.max(min).max(1));
                    let available = eligible_pool_size(sentence, target.polarity, res.set);
                    drawn.min(available).max(1)
                }
            };
            if strategy == StrategyTag::AddDiff {
                add_diff(sentence, aid, res.set, k, &mut rng)
            } else {
                rev_non_add_diff(sentence, aid, res.lex, res.adverbs, res.set, k, &mut rng)
            }
        }
    }?;
    if let (true, KPolicy::Fixed(k)) = (strategy.uses_k(), cfg.k) {
        out.new_id = instance_id(&sentence.sentence_id, aid, strategy, Some(k));
    }
    Ok(out)
}

/// Emit the source instance and every applicable strategy output for each
/// (sentence, target aspect) pair of `ds`.
///
/// Each output draws from its own generator keyed by seed, sentence,
/// aspect and strategy, so the result does not depend on scheduling.
pub fn generate_all(
    ds: &Dataset,
    cfg: &GenerateConfig,
    lex: &AntonymLexicon,
    adverbs: &DegreeAdverbLexicon,
    set: &AspectSet,
) -> (Vec<GeneratedInstance>, SkipReport) {
    let res = Resources { lex, adverbs, set };
    let units: Vec<(&Sentence, &AspectInstance)> = ds
        .sentences
        .iter()
        .flat_map(|s| s.aspects.iter().map(move |a| (s, a)))
        .collect();
    let strategies: Vec<StrategyTag> = std::iter::once(StrategyTag::Source)
        .chain(cfg.strategies.iter().copied().filter(|s| *s != StrategyTag::Source))
        .collect();

    type Outputs = Vec<(StrategyTag, String, Result<GeneratedInstance, Skip>)>;
    let work = || -> Vec<Outputs> {
        units
            .par_iter()
            .map(|(s, a)| {
                strategies
                    .iter()
                    .map(|&st| {
                        let source_id = instance_id(&s.sentence_id, &a.aspect_id, StrategyTag::Source, None);
                        (st, source_id, run_one(s, a, st, cfg, &res))
                    })
                    .collect()
            })
            .collect()
    };
    let results = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };

    let mut out = Vec::new();
    let mut report = SkipReport::default();
    for (strategy, source_id, result) in results.into_iter().flatten() {
        *report.attempted.entry(strategy).or_insert(0) += 1;
        match result {
            Ok(inst) => {
                *report.emitted.entry(strategy).or_insert(0) += 1;
                out.push(inst);
            }
            Err(reason) => {
                *report.counts.entry((strategy, reason)).or_insert(0) += 1;
                report.records.push(SkipRecord {
                    source_id,
                    strategy,
                    reason,
                });
            }
        }
    }
    (out, report)
}
