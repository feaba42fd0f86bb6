use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::pos::{opinion_head, tag_tokens};
use super::{AntonymLexicon, LexiconError};
use crate::corpus::{tokenize, Dataset};

pub const WHITELIST_VERSION: &str = "degree-adverbs/1";

pub const DEGREE_ADVERB_WHITELIST: [&str; 10] = [
    "very",
    "really",
    "extremely",
    "severely",
    "incredibly",
    "absolutely",
    "totally",
    "quite",
    "utterly",
    "remarkably",
];

/// Degree adverbs with the frequency each was seen before an opinion head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeAdverbLexicon {
    adverbs: Vec<(String, u64)>,
}

impl Default for DegreeAdverbLexicon {
    fn default() -> Self {
        Self::whitelist()
    }
}

impl DegreeAdverbLexicon {
    pub fn whitelist() -> Self {
        DegreeAdverbLexicon {
            adverbs: DEGREE_ADVERB_WHITELIST.iter().map(|a| (a.to_string(), 0)).collect(),
        }
    }

    /// A fixed inventory, e.g. to pin the adverb in golden tests.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        let mut adverbs: Vec<(String, u64)> = Vec::new();
        for w in words {
            let w = w.trim().to_lowercase();
            if !w.is_empty() && !adverbs.iter().any(|(a, _)| *a == w) {
                adverbs.push((w, 0));
            }
        }
        DegreeAdverbLexicon { adverbs }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.adverbs
    }

    pub fn len(&self) -> usize {
        self.adverbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adverbs.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        let w = word.to_lowercase();
        self.adverbs.iter().any(|(a, _)| *a == w)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        let w = word.to_lowercase();
        self.adverbs.iter().find(|(a, _)| *a == w).map(|(_, f)| *f)
    }

    /// Uniform draw over the inventory.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&str> {
        self.adverbs.choose(rng).map(|(a, _)| a.as_str())
    }

    /// One `form<TAB>frequency` line per adverb.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (a, f) in &self.adverbs {
            let _ = writeln!(out, "{a}\t{f}");
        }
        out
    }

    pub fn from_tsv(input: &str) -> Result<Self, LexiconError> {
        let mut adverbs: Vec<(String, u64)> = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (form, freq) = match raw.split_once('\t') {
                Some((form, freq)) => {
                    let freq = freq.trim().parse().map_err(|_| LexiconError::Line {
                        line,
                        message: format!("bad frequency {freq:?}"),
                    })?;
                    (form, freq)
                }
                None => (raw, 0),
            };
            let form = form.trim().to_lowercase();
            if adverbs.iter().any(|(a, _)| *a == form) {
                continue;
            }
            adverbs.push((form, freq));
        }
        if adverbs.is_empty() {
            return Err(LexiconError::Line {
                line: 0,
                message: "degree-adverb file lists no adverbs".into(),
            });
        }
        Ok(DegreeAdverbLexicon { adverbs })
    }
}

/// Count whitelist adverbs that sit right before an opinion head word in
/// `train`, and return the whole whitelist with those counts.
///
/// The fallback tagger rarely tags "very" or "quite" as adverbs, so the
/// whitelist itself decides adverbhood.
pub fn build_degree_adverbs(train: &Dataset, lex: &AntonymLexicon) -> DegreeAdverbLexicon {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for sentence in &train.sentences {
        let tokens = tokenize(&sentence.text);
        let tags = tag_tokens(lex, &tokens, None);
        for aspect in &sentence.aspects {
            for op in &aspect.opinions {
                let Some(head) = opinion_head(&tokens, &tags, op.span) else { continue };
                let Some(prev) = head.checked_sub(1).map(|i| &tokens[i]) else { continue };
                let prev = prev.text.to_lowercase();
                if let Some(w) = DEGREE_ADVERB_WHITELIST.iter().find(|w| **w == prev) {
                    *counts.entry(w).or_insert(0) += 1;
                }
            }
        }
    }
    DegreeAdverbLexicon {
        adverbs: DEGREE_ADVERB_WHITELIST
            .iter()
            .map(|w| (w.to_string(), counts.get(w).copied().unwrap_or(0)))
            .collect(),
    }
}
