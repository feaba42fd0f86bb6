//! Enriched JSONL: the corpus line schema plus `source_id`,
//! `target_aspect_id`, `strategy`, `k` and `gold_label`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{GeneratedInstance, StrategyError, StrategyTag};
use crate::corpus::{JsonAspect, Polarity, Sentence};

#[derive(Debug, Serialize, Deserialize)]
struct EnrichedLine {
    id: String,
    text: String,
    aspects: Vec<JsonAspect>,
    source_id: String,
    target_aspect_id: String,
    strategy: StrategyTag,
    k: Option<usize>,
    gold_label: Polarity,
}

pub fn write_enriched(instances: &[GeneratedInstance]) -> Vec<u8> {
    let mut out = Vec::new();
    for inst in instances {
        let line = EnrichedLine {
            id: inst.new_id.clone(),
            text: inst.text.clone(),
            aspects: inst.aspects.iter().map(|a| JsonAspect::from_aspect(&inst.text, a)).collect(),
            source_id: inst.source_sentence_id.clone(),
            target_aspect_id: inst.target_aspect_id.clone(),
            strategy: inst.strategy,
            k: inst.k,
            gold_label: inst.gold_label,
        };
        serde_json::to_writer(&mut out, &line).expect("in-memory JSON serialization");
        out.push(b'\n');
    }
    out
}

/// Read an enriched file. Offsets must match exactly; ids must be unique
/// and every target must be one of the line's aspects.
pub fn read_enriched(input: &[u8]) -> Result<Vec<GeneratedInstance>, StrategyError> {
    let text = std::str::from_utf8(input).map_err(|_| StrategyError::Enriched("invalid UTF-8".into()))?;
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let err = |message: String| StrategyError::Line { line, message };
        let rec: EnrichedLine = serde_json::from_str(raw).map_err(|e| err(e.to_string()))?;
        if !ids.insert(rec.id.clone()) {
            return Err(err(format!("duplicate id {:?}", rec.id)));
        }
        let aspects = rec
            .aspects
            .iter()
            .map(|a| a.to_aspect(&rec.text))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let sentence = Sentence {
            sentence_id: rec.source_id.clone(),
            text: rec.text,
            aspects,
        };
        sentence.validate().map_err(|e| err(e.to_string()))?;
        if sentence.aspect(&rec.target_aspect_id).is_none() {
            return Err(err(format!("target aspect {:?} not among the aspects", rec.target_aspect_id)));
        }
        out.push(GeneratedInstance {
            new_id: rec.id,
            source_sentence_id: rec.source_id,
            target_aspect_id: rec.target_aspect_id,
            strategy: rec.strategy,
            k: rec.k,
            text: sentence.text,
            aspects: sentence.aspects,
            gold_label: rec.gold_label,
        });
    }
    Ok(out)
}
