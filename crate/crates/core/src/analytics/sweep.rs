use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{mean, AnalyticsError, PredictionSet};
use crate::strategies::{GeneratedInstance, StrategyTag};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub n: usize,
    pub accuracy: f64,
}

/// Accuracy per number of appended expressions. Source instances form the
/// k = 0 bucket; each AddDiff instance goes to the bucket of its k.
///
/// `runs` pairs each enriched set with the predictions made on it. A source
/// shared between runs is counted once, with its first run's prediction.
pub fn sweep_report(runs: &[(&PredictionSet, &[GeneratedInstance])]) -> Result<Vec<SweepPoint>, AnalyticsError> {
    let mut buckets: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    let mut seen_sources = HashSet::new();
    for (preds, instances) in runs {
        let mut gold = Vec::new();
        let mut keys = Vec::new();
        for inst in instances.iter() {
            let k = match (inst.strategy, inst.k) {
                (StrategyTag::Source, _) if seen_sources.insert(inst.new_id.as_str()) => 0,
                (StrategyTag::AddDiff, Some(k)) => k,
                _ => continue,
            };
            gold.push((inst.new_id.as_str(), inst.gold_label));
            keys.push(k);
        }
        let bits = preds.correctness(gold)?;
        for (k, bit) in keys.into_iter().zip(bits) {
            buckets.entry(k).or_default().push(bit);
        }
    }
    if buckets.is_empty() {
        return Err(AnalyticsError::Domain("sweep has no source or adddiff instances".into()));
    }
    Ok(buckets
        .into_iter()
        .map(|(k, bits)| SweepPoint {
            k,
            n: bits.len(),
            accuracy: mean(&bits).unwrap_or(0.0),
        })
        .collect())
}

/// Plot-ready `k,accuracy` CSV.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "accuracy"]).expect("in-memory CSV");
    for p in points {
        w.write_record([p.k.to_string(), format!("{:.6}", p.accuracy)]).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("ASCII CSV")
}
