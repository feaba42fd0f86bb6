//! RevTgt, RevNon, AddDiff(k) and RevNon+AddDiff.

mod adddiff;
mod aspect_set;
mod enriched;
mod generate;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokenize, AspectInstance, Polarity, Sentence, Span};
use crate::editgraph::{
    adjust_conjunctions, apply, insert_adverb, negate, polish, Analysis, Edit, EditError, EditPlan, EditTag, Polish,
};
use crate::lexicon::morph::{self, known_lemmas};
use crate::lexicon::{select_antonym, AntonymLexicon, DegreeAdverbLexicon, PosTag};

pub use adddiff::{add_diff, eligible_pool_size, rev_non_add_diff};
pub use aspect_set::{build_aspect_set, AspectExpression, AspectSet};
pub use enriched::{read_enriched, write_enriched};
pub use generate::{generate_all, GenerateConfig, KPolicy, SkipRecord, SkipReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyTag {
    Source,
    #[serde(rename = "revtgt")]
    RevTgt,
    #[serde(rename = "revnon")]
    RevNon,
    #[serde(rename = "adddiff")]
    AddDiff,
    #[serde(rename = "revnon_adddiff")]
    RevNonAddDiff,
}

impl StrategyTag {
    pub const ALL: [StrategyTag; 5] = [
        StrategyTag::Source,
        StrategyTag::RevTgt,
        StrategyTag::RevNon,
        StrategyTag::AddDiff,
        StrategyTag::RevNonAddDiff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyTag::Source => "source",
            StrategyTag::RevTgt => "revtgt",
            StrategyTag::RevNon => "revnon",
            StrategyTag::AddDiff => "adddiff",
            StrategyTag::RevNonAddDiff => "revnon_adddiff",
        }
    }

    pub fn uses_k(self) -> bool {
        matches!(self, StrategyTag::AddDiff | StrategyTag::RevNonAddDiff)
    }
}

impl fmt::Display for StrategyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

/// Why a strategy produced nothing for an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Error)]
pub enum Skip {
    #[error("neutral_target")]
    NeutralTarget,
    #[error("no_target_opinion")]
    NoTargetOpinion,
    #[error("single_aspect")]
    SingleAspect,
    #[error("overlap")]
    Overlap,
    #[error("all_neutral_nontargets")]
    AllNeutralNontargets,
    #[error("nontarget_no_opinion")]
    NontargetNoOpinion,
    #[error("not_negatable")]
    NotNegatable,
    #[error("edit_conflict")]
    EditConflict,
    #[error("no_edit")]
    NoEdit,
    #[error("pool_exhausted")]
    PoolExhausted,
    #[error("unknown_aspect")]
    UnknownAspect,
}

impl Skip {
    pub fn as_str(self) -> &'static str {
        match self {
            Skip::NeutralTarget => "neutral_target",
            Skip::NoTargetOpinion => "no_target_opinion",
            Skip::SingleAspect => "single_aspect",
            Skip::Overlap => "overlap",
            Skip::AllNeutralNontargets => "all_neutral_nontargets",
            Skip::NontargetNoOpinion => "nontarget_no_opinion",
            Skip::NotNegatable => "not_negatable",
            Skip::EditConflict => "edit_conflict",
            Skip::NoEdit => "no_edit",
            Skip::PoolExhausted => "pool_exhausted",
            Skip::UnknownAspect => "unknown_aspect",
        }
    }
}

impl From<EditError> for Skip {
    fn from(e: EditError) -> Self {
        match e {
            EditError::NotNegatable => Skip::NotNegatable,
            _ => Skip::EditConflict,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("neutral polarity cannot be reversed")]
    NotReversible,
    #[error("no non-neutral opinion to build an aspect expression from")]
    EmptyAspectSet,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Enriched(String),
}

pub fn reverse(p: Polarity) -> Result<Polarity, StrategyError> {
    match p {
        Polarity::Positive => Ok(Polarity::Negative),
        Polarity::Negative => Ok(Polarity::Positive),
        Polarity::Neutral => Err(StrategyError::NotReversible),
    }
}

fn reversed(p: Polarity) -> Polarity {
    reverse(p).unwrap_or(p)
}

/// A perturbed (or source) test instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub new_id: String,
    pub source_sentence_id: String,
    pub target_aspect_id: String,
    pub strategy: StrategyTag,
    pub k: Option<usize>,
    pub text: String,
    pub aspects: Vec<AspectInstance>,
    pub gold_label: Polarity,
}

impl GeneratedInstance {
    pub fn source(sentence: &Sentence, target: &AspectInstance) -> Self {
        GeneratedInstance {
            new_id: instance_id(&sentence.sentence_id, &target.aspect_id, StrategyTag::Source, None),
            source_sentence_id: sentence.sentence_id.clone(),
            target_aspect_id: target.aspect_id.clone(),
            strategy: StrategyTag::Source,
            k: None,
            text: sentence.text.clone(),
            aspects: sentence.aspects.clone(),
            gold_label: target.polarity,
        }
    }

    /// The instance as a plain sentence, e.g. to perturb it further.
    pub fn to_sentence(&self) -> Sentence {
        Sentence {
            sentence_id: self.source_sentence_id.clone(),
            text: self.text.clone(),
            aspects: self.aspects.clone(),
        }
    }

    pub fn target(&self) -> Option<&AspectInstance> {
        self.aspects.iter().find(|a| a.aspect_id == self.target_aspect_id)
    }

    /// Id of the source instance this one was derived from.
    pub fn source_id(&self) -> String {
        instance_id(&self.source_sentence_id, &self.target_aspect_id, StrategyTag::Source, None)
    }
}

/// `{sentence}#{aspect}#{strategy}`, with `-k{k}` appended for fixed-k runs.
pub fn instance_id(sentence_id: &str, aspect_id: &str, strategy: StrategyTag, fixed_k: Option<usize>) -> String {
    match fixed_k {
        Some(k) => format!("{sentence_id}#{aspect_id}#{strategy}-k{k}"),
        None => format!("{sentence_id}#{aspect_id}#{strategy}"),
    }
}

fn target_index(sentence: &Sentence, target_id: &str) -> Result<usize, Skip> {
    sentence
        .aspects
        .iter()
        .position(|a| a.aspect_id == target_id)
        .ok_or(Skip::UnknownAspect)
}

fn term_spans(sentence: &Sentence) -> Vec<Span> {
    sentence.aspects.iter().map(|a| a.term_span).collect()
}

/// Edits reversing the opinions of `aspect`: an inflected antonym of each
/// opinion head where the lexicon has one, negation otherwise.
pub fn flip_aspect<R: Rng + ?Sized>(
    sentence: &Sentence,
    aspect: &AspectInstance,
    lex: &AntonymLexicon,
    rng: &mut R,
) -> Result<EditPlan, Skip> {
    let an = Analysis::new(&sentence.text, lex);
    flip_with(&an, aspect, lex, &term_spans(sentence), rng)
}

fn flip_with<R: Rng + ?Sized>(
    an: &Analysis<'_>,
    aspect: &AspectInstance,
    lex: &AntonymLexicon,
    protected: &[Span],
    rng: &mut R,
) -> Result<EditPlan, Skip> {
    let opinions: Vec<Span> = aspect
        .opinions
        .iter()
        .filter(|o| !o.polarity.is_neutral())
        .map(|o| o.span)
        .collect();
    if opinions.is_empty() {
        return Err(Skip::NoTargetOpinion);
    }
    let mut plan = EditPlan::new();
    let mut failure = None;
    for span in opinions {
        let edits = match antonym_edit(an, span, lex, rng) {
            Some(edit) => EditPlan::from_edits([edit]),
            None => negate(an, lex, span, protected),
        };
        match edits.and_then(|e| plan.extend(e)) {
            Ok(()) => {}
            Err(e) => failure = Some(Skip::from(e)),
        }
    }
    match failure {
        Some(reason) if plan.is_empty() => Err(reason),
        _ => Ok(plan),
    }
}

fn antonym_edit<R: Rng + ?Sized>(an: &Analysis<'_>, span: Span, lex: &AntonymLexicon, rng: &mut R) -> Option<Edit> {
    let head = an.head(span)?;
    let pos = an.tags[head];
    if pos == PosTag::Other {
        return None;
    }
    let token = an.tokens[head];
    let lemmas = known_lemmas(lex, token.text, pos);
    let candidates: Vec<&str> = lemmas.iter().flat_map(|l| lex.antonyms(l, pos)).collect();
    let antonym = select_antonym(&candidates, lex.vocabulary(), rng)?;
    let lemma = lemmas.iter().find(|l| lex.antonyms(l, pos).contains(&antonym.as_str()))?;
    let form = morph::inflection_of(lex, token.text, lemma, pos);
    let surface = morph::inflect(lex, &antonym, form, pos);
    Some(Edit::new(token.span, morph::match_case(token.text, &surface), EditTag::Flip))
}

/// Apply a strategy plan and bring the rest of the sentence along:
/// polarities of `flipped` aspects reverse, conjunctions are repaired,
/// articles and sentence-initial case fixed, and every span remapped.
fn realize(
    sentence: &Sentence,
    lex: &AntonymLexicon,
    plan: &EditPlan,
    flipped: &BTreeSet<usize>,
) -> Result<(String, Vec<AspectInstance>), Skip> {
    let (text1, map1) = apply(&sentence.text, plan)?;
    let mut aspects = sentence.aspects.clone();
    for (i, a) in aspects.iter_mut().enumerate() {
        a.term_span = map1.map(a.term_span).ok_or(Skip::EditConflict)?;
        let flip = flipped.contains(&i);
        if flip {
            a.polarity = reversed(a.polarity);
        }
        for op in &mut a.opinions {
            op.span = map1.map_with_prefix(op.span).ok_or(Skip::EditConflict)?;
            if flip {
                op.polarity = reversed(op.polarity);
            }
        }
    }

    let protected: Vec<Span> = aspects.iter().map(|a| a.term_span).collect();
    let opinions: Vec<(Span, Polarity)> = aspects
        .iter()
        .flat_map(|a| a.opinions.iter().map(|o| (o.span, o.polarity)))
        .collect();
    let conj = adjust_conjunctions(&Analysis::new(&text1, lex), &opinions, &protected);
    let (text2, map2) = apply(&text1, &conj)?;
    remap(&mut aspects, &map2)?;

    let first_word = tokenize(&sentence.text).into_iter().find(|t| t.span.start == 0);
    let so_far = map1.then(map2);
    let displaced = first_word
        .filter(|_| plan.edits().iter().any(|e| e.span == Span::new(0, 0)))
        .and_then(|t| so_far.map(t.span))
        .map(|s| s.start)
        .filter(|&s| s > 0);
    let changed = so_far.edited_ranges();
    let protected: Vec<Span> = aspects.iter().map(|a| a.term_span).collect();
    let fix = polish(
        &text2,
        &Polish {
            original: &sentence.text,
            changed: &changed,
            protected: &protected,
            displaced,
        },
    );
    let (text3, map3) = apply(&text2, &fix)?;
    remap(&mut aspects, &map3)?;

    let out = Sentence {
        sentence_id: sentence.sentence_id.clone(),
        text: text3,
        aspects,
    };
    out.validate().map_err(|_| Skip::EditConflict)?;
    Ok((out.text, out.aspects))
}

fn remap(aspects: &mut [AspectInstance], map: &crate::editgraph::SpanMap) -> Result<(), Skip> {
    for a in aspects {
        a.term_span = map.map(a.term_span).ok_or(Skip::EditConflict)?;
        for op in &mut a.opinions {
            op.span = map.map(op.span).ok_or(Skip::EditConflict)?;
        }
    }
    Ok(())
}

/// Reverse the sentiment of the target aspect.
pub fn rev_tgt<R: Rng + ?Sized>(
    sentence: &Sentence,
    target_id: &str,
    lex: &AntonymLexicon,
    rng: &mut R,
) -> Result<GeneratedInstance, Skip> {
    let ti = target_index(sentence, target_id)?;
    let target = &sentence.aspects[ti];
    let gold = reverse(target.polarity).map_err(|_| Skip::NeutralTarget)?;
    if !target.opinions.iter().any(|o| !o.polarity.is_neutral()) {
        return Err(Skip::NoTargetOpinion);
    }
    let an = Analysis::new(&sentence.text, lex);
    let plan = flip_with(&an, target, lex, &term_spans(sentence), rng)?;
    let (text, aspects) = realize(sentence, lex, &plan, &BTreeSet::from([ti]))?;
    Ok(GeneratedInstance {
        new_id: instance_id(&sentence.sentence_id, target_id, StrategyTag::RevTgt, None),
        source_sentence_id: sentence.sentence_id.clone(),
        target_aspect_id: target_id.to_string(),
        strategy: StrategyTag::RevTgt,
        k: None,
        text,
        aspects,
        gold_label: gold,
    })
}

/// Reverse same-polarity non-targets and exaggerate opposite ones.
pub fn rev_non<R: Rng + ?Sized>(
    sentence: &Sentence,
    target_id: &str,
    lex: &AntonymLexicon,
    adverbs: &DegreeAdverbLexicon,
    rng: &mut R,
) -> Result<GeneratedInstance, Skip> {
    let ti = target_index(sentence, target_id)?;
    let target = &sentence.aspects[ti];
    if !target.has_opinions() {
        return Err(Skip::NoTargetOpinion);
    }
    if sentence.aspects.len() < 2 {
        return Err(Skip::SingleAspect);
    }
    let others: Vec<usize> = (0..sentence.aspects.len()).filter(|&i| i != ti).collect();
    let overlaps = others.iter().any(|&i| {
        sentence.aspects[i]
            .opinions
            .iter()
            .any(|o| target.opinions.iter().any(|t| t.span.overlaps(&o.span)))
    });
    if overlaps {
        return Err(Skip::Overlap);
    }
    if others.iter().all(|&i| sentence.aspects[i].polarity.is_neutral()) {
        return Err(Skip::AllNeutralNontargets);
    }

    let an = Analysis::new(&sentence.text, lex);
    let protected = term_spans(sentence);
    let mut plan = EditPlan::new();
    let mut flipped = BTreeSet::new();
    for &i in &others {
        let aspect = &sentence.aspects[i];
        if aspect.polarity.is_neutral() {
            continue;
        }
        if aspect.polarity == target.polarity {
            if !aspect.has_opinions() {
                return Err(Skip::NontargetNoOpinion);
            }
            let flips = flip_with(&an, aspect, lex, &protected, rng)?;
            plan.extend(flips).map_err(|_| Skip::EditConflict)?;
            flipped.insert(i);
        } else {
            for op in aspect.opinions.iter().filter(|o| !o.polarity.is_neutral()) {
                let Some(adverb) = adverbs.sample(rng) else { continue };
                match insert_adverb(&an, op.span, adverb, adverbs) {
                    Ok(extra) => {
                        if extra.edits().iter().any(|e| plan.conflicts_with(e.span))
                            || plan.edits().iter().any(|e| e.span.overlaps(&op.span))
                        {
                            return Err(Skip::EditConflict);
                        }
                        plan.extend(extra).map_err(|_| Skip::EditConflict)?;
                    }
                    Err(EditError::NotExaggerable) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if plan.is_empty() {
        return Err(Skip::NoEdit);
    }
    let (text, aspects) = realize(sentence, lex, &plan, &flipped)?;
    Ok(GeneratedInstance {
        new_id: instance_id(&sentence.sentence_id, target_id, StrategyTag::RevNon, None),
        source_sentence_id: sentence.sentence_id.clone(),
        target_aspect_id: target_id.to_string(),
        strategy: StrategyTag::RevNon,
        k: None,
        text,
        aspects,
        gold_label: target.polarity,
    })
}

#[cfg(test)]
mod tests;
