//! Aspect-annotated sentiment corpora.
//!
//! Spans are byte offsets into the owning sentence text. The XML, JSONL and
//! opinion TSV formats all count characters; conversion goes through
//! [`char_to_byte`] and [`byte_to_char`].

mod jsonl;
mod opinions;
mod tokenize;
mod xml;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use jsonl::{parse_jsonl, write_jsonl};
#[allow(unused_imports)]
pub(crate) use jsonl::{JsonAspect, JsonOpinion};
pub use opinions::{attach_opinions, parse_opinion_tsv, OpinionRecord};
pub use tokenize::{tokenize, Token};
pub use xml::{parse_semeval_xml, write_semeval_xml};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("offset validation failed for sentence(s) {}: {message}", sentence_ids.join(", "))]
    Validation {
        sentence_ids: Vec<String>,
        message: String,
    },
    #[error("opinion annotations reference unknown aspects: {}", keys.join(", "))]
    DanglingOpinions { keys: Vec<String> },
    #[error("overlapping opinion spans for aspect {aspect_id} of sentence {sentence_id}")]
    OverlappingOpinions {
        sentence_id: String,
        aspect_id: String,
    },
    #[error("duplicate sentence id {0}")]
    DuplicateSentence(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Positive, Polarity::Negative, Polarity::Neutral];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }

    pub fn is_neutral(self) -> bool {
        self == Polarity::Neutral
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown polarity label {0:?}")]
pub struct UnknownPolarity(pub String);

impl FromStr for Polarity {
    type Err = UnknownPolarity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" => Ok(Polarity::Positive),
            "negative" | "neg" => Ok(Polarity::Negative),
            "neutral" | "neu" => Ok(Polarity::Neutral),
            _ => Err(UnknownPolarity(s.to_string())),
        }
    }
}

/// A raw label as found in a source file, before conflict filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RawLabel {
    Known(Polarity),
    Conflict,
}

impl FromStr for RawLabel {
    type Err = UnknownPolarity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("conflict") {
            Ok(RawLabel::Conflict)
        } else {
            s.parse().map(RawLabel::Known)
        }
    }
}

/// Half-open byte range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Whether the span is non-empty, in bounds and on char boundaries.
    pub fn is_valid_in(&self, text: &str) -> bool {
        self.start < self.end
            && self.end <= text.len()
            && text.is_char_boundary(self.start)
            && text.is_char_boundary(self.end)
    }

    pub fn slice<'t>(&self, text: &'t str) -> &'t str {
        &text[self.start..self.end]
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opinion {
    pub span: Span,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectInstance {
    pub aspect_id: String,
    pub term: String,
    pub term_span: Span,
    pub polarity: Polarity,
    pub opinions: Vec<Opinion>,
}

impl AspectInstance {
    pub fn new(aspect_id: impl Into<String>, term: impl Into<String>, term_span: Span, polarity: Polarity) -> Self {
        AspectInstance {
            aspect_id: aspect_id.into(),
            term: term.into(),
            term_span,
            polarity,
            opinions: Vec::new(),
        }
    }

    pub fn with_opinion(mut self, span: Span, polarity: Polarity) -> Self {
        self.opinions.push(Opinion { span, polarity });
        self
    }

    pub fn has_opinions(&self) -> bool {
        !self.opinions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub sentence_id: String,
    pub text: String,
    pub aspects: Vec<AspectInstance>,
}

impl Sentence {
    pub fn new(sentence_id: impl Into<String>, text: impl Into<String>) -> Self {
        Sentence {
            sentence_id: sentence_id.into(),
            text: text.into(),
            aspects: Vec::new(),
        }
    }

    /// Add an aspect whose span is the first occurrence of `term`.
    ///
    /// Convenience for fixtures; panics when the term is absent.
    pub fn with_aspect(mut self, aspect_id: &str, term: &str, polarity: Polarity) -> Self {
        let start = self.text.find(term).expect("aspect term not in sentence");
        let span = Span::new(start, start + term.len());
        self.aspects.push(AspectInstance::new(aspect_id, term, span, polarity));
        self
    }

    /// Attach an opinion (first occurrence of `words`) to the aspect `aspect_id`.
    ///
    /// Convenience for fixtures; panics on unknown aspect or absent words.
    pub fn with_opinion(mut self, aspect_id: &str, words: &str, polarity: Polarity) -> Self {
        let start = self.text.find(words).expect("opinion words not in sentence");
        let span = Span::new(start, start + words.len());
        let aspect = self
            .aspects
            .iter_mut()
            .find(|a| a.aspect_id == aspect_id)
            .expect("unknown aspect id");
        aspect.opinions.push(Opinion { span, polarity });
        self
    }

    pub fn aspect(&self, aspect_id: &str) -> Option<&AspectInstance> {
        self.aspects.iter().find(|a| a.aspect_id == aspect_id)
    }

    /// Check the sentence-level invariants: spans in bounds, terms matching
    /// their spans, unique aspect ids and non-overlapping opinions.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut ids = HashSet::new();
        for aspect in &self.aspects {
            if !ids.insert(aspect.aspect_id.as_str()) {
                return Err(self.invalid(format!("duplicate aspect id {}", aspect.aspect_id)));
            }
            if !aspect.term_span.is_valid_in(&self.text) || aspect.term_span.slice(&self.text) != aspect.term {
                return Err(self.invalid(format!(
                    "aspect {} term {:?} does not match span {}",
                    aspect.aspect_id, aspect.term, aspect.term_span
                )));
            }
            validate_opinions(self, aspect)?;
        }
        Ok(())
    }

    fn invalid(&self, message: String) -> CorpusError {
        CorpusError::Validation {
            sentence_ids: vec![self.sentence_id.clone()],
            message,
        }
    }
}

pub(crate) fn validate_opinions(sentence: &Sentence, aspect: &AspectInstance) -> Result<(), CorpusError> {
    for (i, op) in aspect.opinions.iter().enumerate() {
        if !op.span.is_valid_in(&sentence.text) {
            return Err(sentence.invalid(format!(
                "opinion span {} of aspect {} out of bounds",
                op.span, aspect.aspect_id
            )));
        }
        if op.span.overlaps(&aspect.term_span) {
            return Err(sentence.invalid(format!(
                "opinion span {} overlaps the term of aspect {}",
                op.span, aspect.aspect_id
            )));
        }
        if aspect.opinions[..i].iter().any(|other| other.span.overlaps(&op.span)) {
            return Err(CorpusError::OverlappingOpinions {
                sentence_id: sentence.sentence_id.clone(),
                aspect_id: aspect.aspect_id.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

/// Metadata the file formats do not carry themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetMeta {
    pub domain: String,
    pub split: Split,
}

impl Default for DatasetMeta {
    fn default() -> Self {
        DatasetMeta {
            domain: "unknown".to_string(),
            split: Split::Test,
        }
    }
}

/// An aspect carrying the `conflict` label, held aside until
/// [`filter_conflicts`] removes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictAspect {
    pub aspect_id: String,
    pub term: String,
    pub term_span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub domain: String,
    pub split: Split,
    pub sentences: Vec<Sentence>,
    /// Conflict-labelled aspects keyed by sentence id.
    pub conflicts: BTreeMap<String, Vec<ConflictAspect>>,
}

impl Dataset {
    pub fn new(meta: &DatasetMeta) -> Self {
        Dataset {
            domain: meta.domain.clone(),
            split: meta.split,
            sentences: Vec::new(),
            conflicts: BTreeMap::new(),
        }
    }

    pub fn meta(&self) -> DatasetMeta {
        DatasetMeta {
            domain: self.domain.clone(),
            split: self.split,
        }
    }

    pub fn with_sentences(meta: &DatasetMeta, sentences: Vec<Sentence>) -> Result<Self, CorpusError> {
        let ds = Dataset {
            sentences,
            ..Dataset::new(meta)
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Number of (sentence, aspect) instances.
    pub fn instance_count(&self) -> usize {
        self.sentences.iter().map(|s| s.aspects.len()).sum()
    }

    pub fn conflict_count(&self) -> usize {
        self.conflicts.values().map(Vec::len).sum()
    }

    pub fn sentence(&self, sentence_id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.sentence_id == sentence_id)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::new();
        for sentence in &self.sentences {
            if !seen.insert(sentence.sentence_id.as_str()) {
                return Err(CorpusError::DuplicateSentence(sentence.sentence_id.clone()));
            }
            sentence.validate()?;
        }
        Ok(())
    }
}

/// What [`filter_conflicts`] removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RemovedCount {
    pub aspects: usize,
    pub sentences: usize,
}

/// Drop conflict-labelled aspects and the sentences left without aspects.
///
/// Sentences that never had an aspect are kept; only sentences emptied by
/// the removal are dropped.
pub fn filter_conflicts(mut ds: Dataset) -> (Dataset, RemovedCount) {
    let conflicts = std::mem::take(&mut ds.conflicts);
    let mut removed = RemovedCount {
        aspects: conflicts.values().map(Vec::len).sum(),
        sentences: 0,
    };
    ds.sentences.retain(|s| {
        let lost_all = s.aspects.is_empty() && conflicts.get(&s.sentence_id).is_some_and(|c| !c.is_empty());
        if lost_all {
            removed.sentences += 1;
        }
        !lost_all
    });
    (ds, removed)
}

/// Byte offset of the `char_offset`-th character, or `None` past the end.
pub fn char_to_byte(text: &str, char_offset: usize) -> Option<usize> {
    if char_offset == 0 {
        return Some(0);
    }
    let mut count = 0;
    for (byte, _) in text.char_indices() {
        if count == char_offset {
            return Some(byte);
        }
        count += 1;
    }
    (count == char_offset).then_some(text.len())
}

pub fn byte_to_char(text: &str, byte_offset: usize) -> usize {
    text[..byte_offset].chars().count()
}

pub(crate) fn char_span_to_bytes(text: &str, from: usize, to: usize) -> Option<Span> {
    let span = Span::new(char_to_byte(text, from)?, char_to_byte(text, to)?);
    span.is_valid_in(text).then_some(span)
}

pub(crate) fn span_to_chars(text: &str, span: Span) -> (usize, usize) {
    let start = byte_to_char(text, span.start);
    (start, start + span.slice(text).chars().count())
}

/// All byte positions where `needle` occurs, overlapping matches included.
pub fn occurrences(haystack: &str, needle: &str) -> Vec<usize> {
    if needle.is_empty() {
        return Vec::new();
    }
    haystack
        .char_indices()
        .map(|(i, _)| i)
        .filter(|&i| haystack[i..].starts_with(needle))
        .collect()
}

/// A term whose file offsets did not select it and was re-anchored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetRepair {
    pub sentence_id: String,
    pub aspect_id: String,
    pub term: String,
    pub declared: (usize, usize),
    pub repaired: Span,
}

/// Resolve a term given its declared character offsets.
///
/// Returns the span and whether it had to be re-derived. Re-derivation only
/// succeeds when the term occurs exactly once in the text.
pub(crate) fn resolve_term_span(text: &str, term: &str, from: usize, to: usize) -> Option<(Span, bool)> {
    if let Some(span) = char_span_to_bytes(text, from, to) {
        if span.slice(text) == term {
            return Some((span, false));
        }
    }
    match occurrences(text, term).as_slice() {
        [only] => Some((Span::new(*only, only + term.len()), true)),
        _ => None,
    }
}

/// Parsed dataset plus the offset repairs made on the way.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub dataset: Dataset,
    pub repairs: Vec<OffsetRepair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Xml,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xml" => Ok(Format::Xml),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

pub fn parse(input: &[u8], format: Format, meta: &DatasetMeta) -> Result<Parsed, CorpusError> {
    match format {
        Format::Xml => parse_semeval_xml(input, meta),
        Format::Jsonl => parse_jsonl(input, meta),
    }
}

pub fn serialize(ds: &Dataset, format: Format) -> Vec<u8> {
    match format {
        Format::Xml => write_semeval_xml(ds),
        Format::Jsonl => write_jsonl(ds),
    }
}

/// Collects per-aspect resolution failures so one error lists every
/// offending sentence.
#[derive(Default)]
pub(crate) struct ResolveFailures {
    ids: Vec<String>,
    details: Vec<String>,
}

impl ResolveFailures {
    pub(crate) fn push(&mut self, sentence_id: &str, detail: String) {
        if self.ids.last().map(String::as_str) != Some(sentence_id) {
            self.ids.push(sentence_id.to_string());
        }
        self.details.push(detail);
    }

    pub(crate) fn into_result(self) -> Result<(), CorpusError> {
        if self.ids.is_empty() {
            Ok(())
        } else {
            Err(CorpusError::Validation {
                sentence_ids: self.ids,
                message: self.details.join("; "),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn burgers() -> Sentence {
        Sentence::new("s1", "Tasty burgers, and crispy fries.")
            .with_aspect("a1", "burgers", Polarity::Positive)
            .with_aspect("a2", "fries", Polarity::Positive)
    }

    #[test]
    fn polarity_rejects_conflict() {
        assert!("conflict".parse::<Polarity>().is_err());
        assert_eq!("conflict".parse::<RawLabel>(), Ok(RawLabel::Conflict));
        assert_eq!("Positive".parse::<Polarity>(), Ok(Polarity::Positive));
    }

    #[test]
    fn char_byte_conversion() {
        let text = "café au lait";
        assert_eq!(char_to_byte(text, 4), Some(5));
        assert_eq!(char_to_byte(text, 12), Some(text.len()));
        assert_eq!(char_to_byte(text, 13), None);
        assert_eq!(byte_to_char(text, 5), 4);
    }

    #[test]
    fn resolve_unique_rederivation() {
        let text = "Tasty burgers, and crispy fries.";
        assert_eq!(resolve_term_span(text, "burgers", 6, 13), Some((Span::new(6, 13), false)));
        // wrong offsets, unique occurrence
        assert_eq!(resolve_term_span(text, "burgers", 5, 12), Some((Span::new(6, 13), true)));
        // wrong offsets, ambiguous
        assert_eq!(resolve_term_span("fries and fries", "fries", 1, 6), None);
        assert_eq!(resolve_term_span(text, "pizza", 0, 5), None);
    }

    #[test]
    fn rederivation_matches_exhaustive_search() {
        let text = "the food, the food court and the court";
        for term in ["food", "court", "the", "food court", "d c"] {
            let brute: Vec<usize> = (0..text.len())
                .filter(|&i| text.get(i..i + term.len()) == Some(term))
                .collect();
            assert_eq!(occurrences(text, term), brute, "{term}");
            let resolved = resolve_term_span(text, term, 0, 0);
            if brute.len() == 1 {
                assert_eq!(resolved.unwrap().0.start, brute[0]);
            } else {
                assert!(resolved.is_none());
            }
        }
    }

    #[test]
    fn overlapping_opinions_rejected() {
        let s = burgers()
            .with_opinion("a1", "Tasty", Polarity::Positive)
            .with_opinion("a1", "Tas", Polarity::Positive);
        assert!(matches!(s.validate(), Err(CorpusError::OverlappingOpinions { .. })));
    }

    #[test]
    fn opinion_over_term_rejected() {
        let mut s = burgers();
        s.aspects[0].opinions.push(Opinion {
            span: Span::new(0, 8),
            polarity: Polarity::Positive,
        });
        assert!(matches!(s.validate(), Err(CorpusError::Validation { .. })));
    }

    fn with_conflicts() -> Dataset {
        let meta = DatasetMeta::default();
        let mut ds = Dataset::with_sentences(
            &meta,
            vec![
                Sentence::new("s1", "Good pizza, odd pasta.").with_aspect("0", "pizza", Polarity::Positive),
                Sentence::new("s2", "The wine was weird."),
                Sentence::new("s3", "Nothing to say."),
            ],
        )
        .unwrap();
        ds.conflicts.insert(
            "s1".into(),
            vec![ConflictAspect {
                aspect_id: "1".into(),
                term: "pasta".into(),
                term_span: Span::new(16, 21),
            }],
        );
        ds.conflicts.insert(
            "s2".into(),
            vec![ConflictAspect {
                aspect_id: "0".into(),
                term: "wine".into(),
                term_span: Span::new(4, 8),
            }],
        );
        ds
    }

    #[test]
    fn filter_conflicts_counts() {
        let (filtered, removed) = filter_conflicts(with_conflicts());
        assert_eq!(removed, RemovedCount { aspects: 2, sentences: 1 });
        let ids: Vec<_> = filtered.sentences.iter().map(|s| s.sentence_id.as_str()).collect();
        // s3 never had aspects and is kept
        assert_eq!(ids, ["s1", "s3"]);
        assert_eq!(filtered.sentences[0].aspects.len(), 1);
    }

    #[test]
    fn filter_conflicts_idempotent() {
        let (once, _) = filter_conflicts(with_conflicts());
        let (twice, removed) = filter_conflicts(once.clone());
        assert_eq!(once, twice);
        assert_eq!(removed, RemovedCount::default());
    }
}
