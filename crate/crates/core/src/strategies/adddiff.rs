use rand::seq::index;
use rand::{Rng, RngExt};

use super::{instance_id, rev_non, target_index, AspectExpression, AspectSet, GeneratedInstance, Skip, StrategyTag};
use crate::corpus::{tokenize, AspectInstance, Polarity, Sentence, Span};
use crate::editgraph::{apply, Edit, EditPlan, EditTag};
use crate::lexicon::{AntonymLexicon, DegreeAdverbLexicon};

fn lower_tokens(text: &str) -> Vec<String> {
    tokenize(text).iter().map(|t| t.text.to_lowercase()).collect()
}

fn mentions(sentence: &[String], term: &[String]) -> bool {
    !term.is_empty() && sentence.windows(term.len()).any(|w| w == term)
}

fn differs(target: Polarity, p: Polarity) -> bool {
    !p.is_neutral() && p != target
}

/// Eligible expressions grouped by aspect term, groups in pool order.
fn eligible<'s>(sentence: &Sentence, target: Polarity, set: &'s AspectSet) -> Vec<Vec<&'s AspectExpression>> {
    let words = lower_tokens(&sentence.text);
    let mut groups: Vec<(Vec<String>, Vec<&AspectExpression>)> = Vec::new();
    for e in set.expressions().iter().filter(|e| differs(target, e.polarity)) {
        let term = lower_tokens(&e.aspect_term);
        if mentions(&words, &term) {
            continue;
        }
        match groups.iter_mut().find(|(t, _)| *t == term) {
            Some((_, g)) => g.push(e),
            None => groups.push((term, vec![e])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// How many distinct unmentioned aspect terms with a different polarity
/// the pool offers for this target.
pub fn eligible_pool_size(sentence: &Sentence, target: Polarity, set: &AspectSet) -> usize {
    eligible(sentence, target, set).len()
}

/// Join with ", " and ", and " before the last; also returns where each
/// part starts.
fn join(parts: &[&str]) -> (String, Vec<usize>) {
    let mut out = String::new();
    let mut starts = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.push_str(if i + 1 == parts.len() { ", and " } else { ", " });
        }
        starts.push(out.len());
        out.push_str(part);
    }
    (out, starts)
}

/// Append `k` aspect expressions of a different polarity, for aspects the
/// sentence does not mention.
pub fn add_diff<R: Rng + ?Sized>(
    sentence: &Sentence,
    target_id: &str,
    set: &AspectSet,
    k: usize,
    rng: &mut R,
) -> Result<GeneratedInstance, Skip> {
    let ti = target_index(sentence, target_id)?;
    let target = &sentence.aspects[ti];
    let groups = eligible(sentence, target.polarity, set);
    if k == 0 || groups.len() < k {
        return Err(Skip::PoolExhausted);
    }
    let mut picked: Vec<usize> = index::sample(rng, groups.len(), k).into_vec();
    picked.sort_unstable();
    let chosen: Vec<&AspectExpression> = picked
        .into_iter()
        .map(|g| {
            let group = &groups[g];
            if group.len() == 1 {
                group[0]
            } else {
                group[rng.random_range(0..group.len())]
            }
        })
        .collect();

    let text = &sentence.text;
    let body = text.trim_end();
    let stripped = body.trim_end_matches(['.', '!', '?', '\u{2026}']);
    let has_terminal = stripped.len() < body.len();
    let at = stripped.trim_end().len();
    let exprs: Vec<&str> = chosen.iter().map(|e| e.expression.as_str()).collect();
    let prefix = ", but ";
    let (joined, starts) = join(&exprs);
    let mut inserted = format!("{prefix}{joined}");
    if !has_terminal {
        inserted.push('.');
    }

    let plan = EditPlan::from_edits([Edit::insert(at, inserted, EditTag::Append)])?;
    let (new_text, map) = apply(text, &plan)?;
    let mut aspects = sentence.aspects.clone();
    for a in &mut aspects {
        a.term_span = map.map(a.term_span).ok_or(Skip::EditConflict)?;
        for op in &mut a.opinions {
            op.span = map.map(op.span).ok_or(Skip::EditConflict)?;
        }
    }
    let mut n = 0;
    for (e, part_start) in chosen.iter().zip(starts) {
        let within = e.expression.find(&e.aspect_term).ok_or(Skip::EditConflict)?;
        let start = at + prefix.len() + part_start + within;
        let id = loop {
            n += 1;
            let id = format!("adddiff-{n}");
            if !aspects.iter().any(|a| a.aspect_id == id) {
                break id;
            }
        };
        aspects.push(AspectInstance::new(
            id,
            e.aspect_term.clone(),
            Span::new(start, start + e.aspect_term.len()),
            e.polarity,
        ));
    }

    let out = Sentence {
        sentence_id: sentence.sentence_id.clone(),
        text: new_text,
        aspects,
    };
    out.validate().map_err(|_| Skip::EditConflict)?;
    Ok(GeneratedInstance {
        new_id: instance_id(&sentence.sentence_id, target_id, StrategyTag::AddDiff, None),
        source_sentence_id: sentence.sentence_id.clone(),
        target_aspect_id: target_id.to_string(),
        strategy: StrategyTag::AddDiff,
        k: Some(k),
        text: out.text,
        aspects: out.aspects,
        gold_label: target.polarity,
    })
}

/// RevNon followed by AddDiff on its output.
#[allow(clippy::too_many_arguments)]
pub fn rev_non_add_diff<R: Rng + ?Sized>(
    sentence: &Sentence,
    target_id: &str,
    lex: &AntonymLexicon,
    adverbs: &DegreeAdverbLexicon,
    set: &AspectSet,
    k: usize,
    rng: &mut R,
) -> Result<GeneratedInstance, Skip> {
    let first = rev_non(sentence, target_id, lex, adverbs, rng)?;
    let mut out = add_diff(&first.to_sentence(), target_id, set, k, rng)?;
    out.strategy = StrategyTag::RevNonAddDiff;
    out.new_id = instance_id(&sentence.sentence_id, target_id, StrategyTag::RevNonAddDiff, None);
    Ok(out)
}
