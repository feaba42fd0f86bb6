//! One JSON object per line:
//!
//! ```json
//! {"id":"s1","text":"...","aspects":[{"aspect_id":"0","term":"burgers","from":6,"to":13,
//!   "polarity":"positive","opinions":[{"from":0,"to":5,"polarity":"positive"}]}]}
//! ```
//!
//! Offsets count characters. Unknown keys are ignored, so enriched files
//! parse as plain corpora too.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{
    char_span_to_bytes, resolve_term_span, span_to_chars, AspectInstance, ConflictAspect, CorpusError, Dataset,
    DatasetMeta, Opinion, OffsetRepair, Parsed, Polarity, RawLabel, ResolveFailures, Sentence,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct JsonOpinion {
    pub from: usize,
    pub to: usize,
    pub polarity: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct JsonAspect {
    pub aspect_id: String,
    pub term: String,
    pub from: usize,
    pub to: usize,
    pub polarity: String,
    #[serde(default)]
    pub opinions: Vec<JsonOpinion>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonSentence {
    id: String,
    text: String,
    aspects: Vec<JsonAspect>,
}

impl JsonAspect {
    pub(crate) fn from_aspect(text: &str, aspect: &AspectInstance) -> Self {
        let (from, to) = span_to_chars(text, aspect.term_span);
        JsonAspect {
            aspect_id: aspect.aspect_id.clone(),
            term: aspect.term.clone(),
            from,
            to,
            polarity: aspect.polarity.to_string(),
            opinions: aspect
                .opinions
                .iter()
                .map(|op| {
                    let (from, to) = span_to_chars(text, op.span);
                    JsonOpinion {
                        from,
                        to,
                        polarity: op.polarity.to_string(),
                    }
                })
                .collect(),
        }
    }

    /// Convert to an aspect, requiring exact offsets (no re-derivation).
    pub(crate) fn to_aspect(&self, text: &str) -> Result<AspectInstance, String> {
        let polarity: Polarity = self.polarity.parse().map_err(|e: super::UnknownPolarity| e.to_string())?;
        let span = char_span_to_bytes(text, self.from, self.to)
            .filter(|s| s.slice(text) == self.term)
            .ok_or_else(|| format!("aspect {} term {:?} does not match its offsets", self.aspect_id, self.term))?;
        let mut aspect = AspectInstance::new(self.aspect_id.clone(), self.term.clone(), span, polarity);
        for op in &self.opinions {
            aspect.opinions.push(opinion_from_json(text, op)?);
        }
        Ok(aspect)
    }
}

fn opinion_from_json(text: &str, op: &JsonOpinion) -> Result<Opinion, String> {
    let polarity = op.polarity.parse().map_err(|e: super::UnknownPolarity| e.to_string())?;
    let span = char_span_to_bytes(text, op.from, op.to)
        .ok_or_else(|| format!("opinion ({},{}) out of bounds", op.from, op.to))?;
    Ok(Opinion { span, polarity })
}

pub fn parse_jsonl(input: &[u8], meta: &DatasetMeta) -> Result<Parsed, CorpusError> {
    let source = std::str::from_utf8(input).map_err(|e| CorpusError::Schema {
        line: input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "invalid UTF-8".into(),
    })?;
    let mut ds = Dataset::new(meta);
    let mut repairs = Vec::new();
    let mut failures = ResolveFailures::default();
    let mut seen = HashSet::new();

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: JsonSentence = serde_json::from_str(line).map_err(|e| CorpusError::Schema {
            line: line_no,
            message: e.to_string(),
        })?;
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateSentence(record.id));
        }
        let mut sentence = Sentence::new(record.id.clone(), record.text);
        let mut conflicts = Vec::new();
        for ja in record.aspects {
            let label: RawLabel = ja.polarity.parse().map_err(|e: super::UnknownPolarity| CorpusError::Schema {
                line: line_no,
                message: e.to_string(),
            })?;
            let Some((span, repaired)) = resolve_term_span(&sentence.text, &ja.term, ja.from, ja.to) else {
                failures.push(
                    &record.id,
                    format!("aspect {} term {:?} at ({},{})", ja.aspect_id, ja.term, ja.from, ja.to),
                );
                continue;
            };
            if repaired {
                repairs.push(OffsetRepair {
                    sentence_id: record.id.clone(),
                    aspect_id: ja.aspect_id.clone(),
                    term: ja.term.clone(),
                    declared: (ja.from, ja.to),
                    repaired: span,
                });
            }
            match label {
                RawLabel::Conflict => conflicts.push(ConflictAspect {
                    aspect_id: ja.aspect_id,
                    term: ja.term,
                    term_span: span,
                }),
                RawLabel::Known(polarity) => {
                    let mut aspect = AspectInstance::new(ja.aspect_id, ja.term, span, polarity);
                    for op in &ja.opinions {
                        let op = opinion_from_json(&sentence.text, op).map_err(|message| CorpusError::Schema {
                            line: line_no,
                            message,
                        })?;
                        aspect.opinions.push(op);
                    }
                    sentence.aspects.push(aspect);
                }
            }
        }
        if !conflicts.is_empty() {
            ds.conflicts.insert(record.id, conflicts);
        }
        ds.sentences.push(sentence);
    }
    failures.into_result()?;
    ds.validate()?;
    Ok(Parsed { dataset: ds, repairs })
}

pub fn write_jsonl(ds: &Dataset) -> Vec<u8> {
    let mut out = Vec::new();
    for sentence in &ds.sentences {
        let mut aspects: Vec<JsonAspect> = sentence
            .aspects
            .iter()
            .map(|a| JsonAspect::from_aspect(&sentence.text, a))
            .collect();
        for c in ds.conflicts.get(&sentence.sentence_id).into_iter().flatten() {
            let (from, to) = span_to_chars(&sentence.text, c.term_span);
            aspects.push(JsonAspect {
                aspect_id: c.aspect_id.clone(),
                term: c.term.clone(),
                from,
                to,
                polarity: "conflict".into(),
                opinions: Vec::new(),
            });
        }
        let record = JsonSentence {
            id: sentence.sentence_id.clone(),
            text: sentence.text.clone(),
            aspects,
        };
        serde_json::to_writer(&mut out, &record).expect("in-memory JSON serialization");
        out.push(b'\n');
    }
    out
}
