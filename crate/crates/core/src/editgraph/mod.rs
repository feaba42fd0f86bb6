//! Span edits over raw sentence text with offset remapping, plus the
//! negation, conjunction and adverb micro-operations built on them.

mod ops;

use std::fmt;

use thiserror::Error;

use crate::corpus::Span;

pub use ops::{adjust_conjunctions, insert_adverb, negate, polish, Analysis, Polish};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("edits {first} and {second} overlap")]
    Overlap { first: Span, second: Span },
    #[error("edit span {0} is out of bounds or splits a character")]
    OutOfBounds(Span),
    #[error("no verb or adjective to negate")]
    NotNegatable,
    #[error("opinion head is neither an adjective nor an adverb")]
    NotExaggerable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditTag {
    Flip,
    Negate,
    Conj,
    Adverb,
    Append,
}

impl EditTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EditTag::Flip => "flip",
            EditTag::Negate => "negate",
            EditTag::Conj => "conj",
            EditTag::Adverb => "adverb",
            EditTag::Append => "append",
        }
    }
}

impl fmt::Display for EditTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Replace `span` of the source text with `replacement`. A zero-width span
/// is an insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub span: Span,
    pub replacement: String,
    pub tag: EditTag,
}

impl Edit {
    pub fn new(span: Span, replacement: impl Into<String>, tag: EditTag) -> Self {
        Edit {
            span,
            replacement: replacement.into(),
            tag,
        }
    }

    pub fn insert(at: usize, text: impl Into<String>, tag: EditTag) -> Self {
        Edit::new(Span::new(at, at), text, tag)
    }
}

/// Non-overlapping edits sorted by position.
///
/// Insertions at the same offset keep the order they were added in, and an
/// insertion at the start of a replaced span goes before it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditPlan {
    edits: Vec<Edit>,
}

impl EditPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edits(edits: impl IntoIterator<Item = Edit>) -> Result<Self, EditError> {
        let mut plan = EditPlan::new();
        for e in edits {
            plan.push(e)?;
        }
        Ok(plan)
    }

    pub fn push(&mut self, edit: Edit) -> Result<(), EditError> {
        let at = self
            .edits
            .partition_point(|e| (e.span.start, e.span.end) <= (edit.span.start, edit.span.end));
        self.edits.insert(at, edit);
        if let Err(err) = self.check_overlaps() {
            self.edits.remove(at);
            return Err(err);
        }
        Ok(())
    }

    pub fn extend(&mut self, other: EditPlan) -> Result<(), EditError> {
        for e in other.edits {
            self.push(e)?;
        }
        Ok(())
    }

    /// Whether `span` could be added without an overlap.
    pub fn conflicts_with(&self, span: Span) -> bool {
        self.edits.iter().any(|e| touches(e.span, span))
    }

    fn check_overlaps(&self) -> Result<(), EditError> {
        let mut widest: Option<Span> = None;
        for e in &self.edits {
            if let Some(w) = widest {
                if e.span.start < w.end {
                    return Err(EditError::Overlap {
                        first: w,
                        second: e.span,
                    });
                }
            }
            if widest.is_none_or(|w| e.span.end >= w.end) {
                widest = Some(e.span);
            }
        }
        Ok(())
    }

    pub fn edits(&self) -> &[Edit] {
        &self.edits
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }
}

/// Two edit spans clash when they share a character, or when an insertion
/// falls strictly inside a replaced span.
fn touches(a: Span, b: Span) -> bool {
    a.overlaps(&b) || (a.is_empty() && b.start < a.start && a.start < b.end) || (b.is_empty() && a.start < b.start && b.start < a.end)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Layer {
    /// Source span of each edit with the length of its replacement.
    edits: Vec<(Span, usize)>,
}

impl Layer {
    fn delta(span: Span, new_len: usize) -> isize {
        new_len as isize - span.len() as isize
    }

    fn map_start(&self, pos: usize) -> usize {
        let shift: isize = self
            .edits
            .iter()
            .filter(|(s, _)| s.end <= pos)
            .map(|&(s, n)| Self::delta(s, n))
            .sum();
        (pos as isize + shift) as usize
    }

    fn map_end(&self, pos: usize) -> usize {
        let shift: isize = self
            .edits
            .iter()
            .filter(|(s, _)| s.start < pos)
            .map(|&(s, n)| Self::delta(s, n))
            .sum();
        (pos as isize + shift) as usize
    }

    fn map(&self, span: Span, keep_prefix: bool) -> Option<Span> {
        let cuts = |pos: usize| self.edits.iter().any(|(s, _)| s.start < pos && pos < s.end);
        if cuts(span.start) || cuts(span.end) {
            return None;
        }
        let start = if keep_prefix {
            // zero-width edits at span.start count as part of the span
            let prefix: usize = self
                .edits
                .iter()
                .filter(|(s, _)| s.is_empty() && s.start == span.start)
                .map(|&(_, n)| n)
                .sum();
            self.map_start(span.start) - prefix
        } else {
            self.map_start(span.start)
        };
        Some(Span::new(start, self.map_end(span.end).max(start)))
    }

    fn targets(&self) -> Vec<Span> {
        let mut shift = 0isize;
        self.edits
            .iter()
            .map(|&(s, n)| {
                let start = (s.start as isize + shift) as usize;
                shift += Self::delta(s, n);
                Span::new(start, start + n)
            })
            .collect()
    }
}

/// Offset remapping from the text an edit plan was applied to into its
/// output. Maps compose, so a chain of plans yields a single map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanMap {
    layers: Vec<Layer>,
}

impl SpanMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.layers.iter().all(|l| l.edits.is_empty())
    }

    /// Remap a source span. Spans that contain an edit or sit entirely
    /// outside every edit map fine; a span cutting through an edited region
    /// has no image.
    pub fn map(&self, span: Span) -> Option<Span> {
        self.layers.iter().try_fold(span, |s, l| l.map(s, false))
    }

    /// Like [`SpanMap::map`], but text inserted exactly at the span start
    /// becomes part of the image ("poor" -> "extremely poor").
    pub fn map_with_prefix(&self, span: Span) -> Option<Span> {
        self.layers.iter().try_fold(span, |s, l| l.map(s, true))
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: SpanMap) -> SpanMap {
        self.layers.extend(next.layers);
        self
    }

    /// Output ranges holding replacement text, in final coordinates. Ranges
    /// later cut by another layer are dropped.
    pub fn edited_ranges(&self) -> Vec<Span> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for target in layer.targets() {
                if let Some(s) = self.layers[i + 1..].iter().try_fold(target, |s, l| l.map(s, false)) {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }
}

/// Apply `plan` to `text`.
pub fn apply(text: &str, plan: &EditPlan) -> Result<(String, SpanMap), EditError> {
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for e in &plan.edits {
        let s = e.span;
        if s.end > text.len() || s.start > s.end || !text.is_char_boundary(s.start) || !text.is_char_boundary(s.end) {
            return Err(EditError::OutOfBounds(s));
        }
        out.push_str(&text[cursor..s.start]);
        out.push_str(&e.replacement);
        cursor = s.end;
    }
    out.push_str(&text[cursor..]);
    let layer = Layer {
        edits: plan.edits.iter().map(|e| (e.span, e.replacement.len())).collect(),
    };
    Ok((out, SpanMap { layers: vec![layer] }))
}
