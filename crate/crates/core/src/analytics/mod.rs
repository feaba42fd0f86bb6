//! Scoring of prediction files against enriched test sets.

mod report;
mod stats;
mod sweep;
mod welch;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::corpus::Polarity;
use crate::strategies::{GeneratedInstance, StrategyTag};

pub use report::{models_table, subset_report, EvalReport, KAccuracy, SubsetRow};
pub use stats::{dataset_stats, enriched_stats, stats_table, DatasetStats};
pub use sweep::{sweep_csv, sweep_report, SweepPoint};
pub use welch::{welch_t, Welch};

/// Ids that a prediction file failed to cover.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{count} instance ids have no prediction (first: {})", first.join(", "))]
pub struct CoverageError {
    pub count: usize,
    /// Up to five ids, in gold order.
    pub first: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("inconsistent instances: {0}")]
    Inconsistent(String),
}

/// Predicted labels keyed by instance id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredictionSet {
    pub model_name: String,
    labels: HashMap<String, Polarity>,
}

impl PredictionSet {
    pub fn new(model_name: impl Into<String>) -> Self {
        PredictionSet {
            model_name: model_name.into(),
            labels: HashMap::new(),
        }
    }

    pub fn insert(&mut self, id: impl Into<String>, label: Polarity) -> Option<Polarity> {
        self.labels.insert(id.into(), label)
    }

    pub fn get(&self, id: &str) -> Option<Polarity> {
        self.labels.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `instance_id<TAB>predicted_label` lines. A first line reading
    /// `instance_id<TAB>predicted_label` is taken as a header.
    pub fn from_tsv(model_name: impl Into<String>, input: &str) -> Result<Self, AnalyticsError> {
        let mut set = PredictionSet::new(model_name);
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || (line == 1 && raw.starts_with("instance_id\t")) {
                continue;
            }
            let err = |message: String| AnalyticsError::Line { line, message };
            let (id, label) = raw
                .split_once('\t')
                .ok_or_else(|| err("expected instance_id<TAB>predicted_label".into()))?;
            let label: Polarity = label.trim().parse().map_err(|e: crate::corpus::UnknownPolarity| err(e.to_string()))?;
            if set.insert(id, label).is_some() {
                return Err(err(format!("duplicate id {id:?}")));
            }
        }
        Ok(set)
    }

    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<_> = self.labels.iter().collect();
        rows.sort();
        let mut out = String::from("instance_id\tpredicted_label\n");
        for (id, label) in rows {
            out.push_str(&format!("{id}\t{label}\n"));
        }
        out
    }

    /// Fails with the uncovered ids if any of `ids` lacks a prediction.
    pub fn check_coverage<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<(), CoverageError> {
        let mut count = 0;
        let mut first = Vec::new();
        for id in ids {
            if !self.labels.contains_key(id) {
                count += 1;
                if first.len() < 5 {
                    first.push(id.to_string());
                }
            }
        }
        if count == 0 {
            Ok(())
        } else {
            Err(CoverageError { count, first })
        }
    }

    /// Per-item correctness in input order.
    pub fn correctness<'a>(
        &self,
        gold: impl IntoIterator<Item = (&'a str, Polarity)>,
    ) -> Result<Vec<bool>, CoverageError> {
        let gold: Vec<_> = gold.into_iter().collect();
        self.check_coverage(gold.iter().map(|(id, _)| *id))?;
        Ok(gold.iter().map(|(id, label)| self.labels[*id] == *label).collect())
    }
}

fn mean(bits: &[bool]) -> Option<f64> {
    if bits.is_empty() {
        None
    } else {
        Some(bits.iter().filter(|b| **b).count() as f64 / bits.len() as f64)
    }
}

/// Fraction of `gold` items predicted correctly.
pub fn accuracy<'a>(
    preds: &PredictionSet,
    gold: impl IntoIterator<Item = (&'a str, Polarity)>,
) -> Result<f64, AnalyticsError> {
    let bits = preds.correctness(gold)?;
    mean(&bits).ok_or_else(|| AnalyticsError::Domain("accuracy of an empty set".into()))
}

/// A source instance together with all its generated variations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessUnit {
    pub source_id: String,
    pub source_label: Polarity,
    pub variations: BTreeMap<StrategyTag, Vec<(String, Polarity)>>,
}

impl RobustnessUnit {
    pub fn ids(&self) -> impl Iterator<Item = (&str, Polarity)> {
        std::iter::once((self.source_id.as_str(), self.source_label)).chain(
            self.variations
                .values()
                .flatten()
                .map(|(id, label)| (id.as_str(), *label)),
        )
    }

    pub fn has(&self, strategy: StrategyTag) -> bool {
        self.variations.get(&strategy).is_some_and(|v| !v.is_empty())
    }
}

type Group<'a> = (Option<&'a GeneratedInstance>, Vec<&'a GeneratedInstance>);

/// Group instances by (source sentence, target aspect). Every group needs
/// exactly one source instance.
pub fn robustness_units(instances: &[GeneratedInstance]) -> Result<Vec<RobustnessUnit>, AnalyticsError> {
    let mut order: Vec<(&str, &str)> = Vec::new();
    let mut groups: HashMap<(&str, &str), Group<'_>> = HashMap::new();
    for inst in instances {
        let key = (inst.source_sentence_id.as_str(), inst.target_aspect_id.as_str());
        let entry = groups.entry(key).or_insert_with(|| {
            order.push(key);
            (None, Vec::new())
        });
        if inst.strategy == StrategyTag::Source {
            if entry.0.is_some() {
                return Err(AnalyticsError::Inconsistent(format!(
                    "two source instances for {}#{}",
                    key.0, key.1
                )));
            }
            entry.0 = Some(inst);
        } else {
            entry.1.push(inst);
        }
    }
    order
        .into_iter()
        .map(|key| {
            let (source, vars) = &groups[&key];
            let source = source.ok_or_else(|| {
                AnalyticsError::Inconsistent(format!("variations of {}#{} without a source instance", key.0, key.1))
            })?;
            let mut variations: BTreeMap<StrategyTag, Vec<(String, Polarity)>> = BTreeMap::new();
            for v in vars {
                variations
                    .entry(v.strategy)
                    .or_default()
                    .push((v.new_id.clone(), v.gold_label));
            }
            Ok(RobustnessUnit {
                source_id: source.new_id.clone(),
                source_label: source.gold_label,
                variations,
            })
        })
        .collect()
}

/// Per-unit correctness: the source and every variation right.
pub fn unit_correctness(preds: &PredictionSet, units: &[RobustnessUnit]) -> Result<Vec<bool>, CoverageError> {
    preds.check_coverage(units.iter().flat_map(|u| u.ids().map(|(id, _)| id)))?;
    Ok(units
        .iter()
        .map(|u| u.ids().all(|(id, label)| preds.get(id) == Some(label)))
        .collect())
}

/// Aspect Robustness Score: accuracy with each unit counted as one item.
pub fn ars(preds: &PredictionSet, units: &[RobustnessUnit]) -> Result<f64, AnalyticsError> {
    let bits = unit_correctness(preds, units)?;
    mean(&bits).ok_or_else(|| AnalyticsError::Domain("ARS of an empty set".into()))
}
