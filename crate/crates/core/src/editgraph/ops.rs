use super::{Edit, EditError, EditPlan, EditTag};
use crate::corpus::{tokenize, Polarity, Span, Token};
use crate::lexicon::morph::{self, Inflection};
use crate::lexicon::{opinion_head, tag_tokens, AntonymLexicon, DegreeAdverbLexicon, PosTag};

/// Copulas and modals: negated by a following "not".
const NOT_AFTER: &[&str] = &[
    "am", "is", "are", "was", "were", "can", "could", "will", "would", "shall", "should", "may", "might", "must",
];
/// Lexical uses get do-support, auxiliary uses take "not".
const DO_HAVE: &[&str] = &["have", "has", "had", "do", "does", "did"];
const CONTRACTIONS: &[&str] = &["'s", "'re", "'m", "'ve", "'ll", "'d"];
/// Adverbs that may sit between an auxiliary and its verb without a -ly.
const MEDIAL_ADVERBS: &[&str] = &["always", "never", "still", "just", "also", "even", "often", "ever", "already", "only", "really", "very"];

/// A sentence with its tokens and POS tags.
#[derive(Debug, Clone)]
pub struct Analysis<'a> {
    pub text: &'a str,
    pub tokens: Vec<Token<'a>>,
    pub tags: Vec<PosTag>,
}

impl<'a> Analysis<'a> {
    pub fn new(text: &'a str, lex: &AntonymLexicon) -> Self {
        let tokens = tokenize(text);
        let tags = tag_tokens(lex, &tokens, None);
        Analysis { text, tokens, tags }
    }

    /// Use caller-provided tags, one per token.
    pub fn with_tags(text: &'a str, tags: Vec<PosTag>) -> Self {
        let tokens = tokenize(text);
        assert_eq!(tokens.len(), tags.len(), "one tag per token");
        Analysis { text, tokens, tags }
    }

    pub fn head(&self, span: Span) -> Option<usize> {
        opinion_head(&self.tokens, &self.tags, span)
    }

    fn lower(&self, i: usize) -> String {
        self.tokens[i].text.to_lowercase().replace('\u{2019}', "'")
    }

    /// The word token right before byte offset `pos`, if any.
    fn word_before(&self, pos: usize) -> Option<usize> {
        let i = self.tokens.partition_point(|t| t.span.end <= pos).checked_sub(1)?;
        self.tokens[i].is_word().then_some(i)
    }

    fn has_contraction(&self, i: usize) -> bool {
        let w = self.lower(i);
        !w.starts_with('\'') && CONTRACTIONS.iter().any(|c| w.ends_with(c))
    }

    fn is_verbish(&self, i: usize) -> bool {
        let w = self.lower(i);
        self.tags[i] == PosTag::Verb
            || NOT_AFTER.contains(&w.as_str())
            || DO_HAVE.contains(&w.as_str())
            || self.has_contraction(i)
    }

    fn is_auxiliary(&self, i: usize) -> bool {
        let w = self.lower(i);
        NOT_AFTER.contains(&w.as_str()) || DO_HAVE.contains(&w.as_str()) || self.has_contraction(i)
    }
}

fn all_caps(word: &str) -> bool {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    letters.len() > 1 && letters.iter().all(|c| c.is_uppercase())
}

fn in_any(spans: &[Span], s: Span) -> bool {
    spans.iter().any(|p| p.overlaps(&s))
}

/// Negate the opinion at `opinion`. Tokens inside `protected` (aspect
/// terms) are never touched.
pub fn negate(an: &Analysis<'_>, lex: &AntonymLexicon, opinion: Span, protected: &[Span]) -> Result<EditPlan, EditError> {
    let head = an.head(opinion).ok_or(EditError::NotNegatable)?;
    if an.tags[head] == PosTag::Adjective {
        let not = if all_caps(an.tokens[head].text) { "NOT " } else { "not " };
        return EditPlan::from_edits([Edit::insert(opinion.start, not, EditTag::Negate)]);
    }
    if an.is_verbish(head) {
        return negate_verb(an, lex, head);
    }
    let verb = (0..an.tokens.len())
        .filter(|&i| an.is_verbish(i) && !in_any(protected, an.tokens[i].span))
        .min_by_key(|&i| (i.abs_diff(head), i > head))
        .ok_or(EditError::NotNegatable)?;
    negate_verb(an, lex, verb)
}

fn negate_verb(an: &Analysis<'_>, lex: &AntonymLexicon, i: usize) -> Result<EditPlan, EditError> {
    let token = an.tokens[i];
    let word = an.lower(i);
    if word.ends_with("n't") || word == "not" {
        return Err(EditError::NotNegatable);
    }
    let caps = all_caps(token.text);
    let cased = |s: &str| if caps { s.to_uppercase() } else { s.to_string() };
    let not_after = |j: usize| EditPlan::from_edits([Edit::insert(an.tokens[j].span.end, cased(" not"), EditTag::Negate)]);

    if NOT_AFTER.contains(&word.as_str()) || an.has_contraction(i) {
        return not_after(i);
    }
    // "has changed", "will always love": negate the auxiliary
    let mut j = i;
    while let Some(prev) = an.word_before(an.tokens[j].span.start) {
        if an.is_auxiliary(prev) {
            return not_after(prev);
        }
        let skippable = an.tags[prev] == PosTag::Adverb || MEDIAL_ADVERBS.contains(&an.lower(prev).as_str());
        if !skippable || i - prev > 2 {
            break;
        }
        j = prev;
    }
    if word.ends_with("ing") && !DO_HAVE.contains(&word.as_str()) {
        return EditPlan::from_edits([Edit::insert(token.span.start, cased("not "), EditTag::Negate)]);
    }
    let lemma = morph::lemmatize(lex, &word, PosTag::Verb);
    let aux = match morph::inflection_of(lex, &word, &lemma, PosTag::Verb) {
        Inflection::Past => "did not ",
        Inflection::S => "does not ",
        _ => "do not ",
    };
    let lemma = if caps {
        lemma.to_uppercase()
    } else if token.span.start == 0 {
        lemma
    } else {
        morph::match_case(token.text, &lemma)
    };
    EditPlan::from_edits([
        Edit::insert(token.span.start, cased(aux), EditTag::Negate),
        Edit::new(token.span, lemma, EditTag::Negate),
    ])
}

/// Make each and/but/yet agree with the opinions on either side of it.
///
/// `opinions` carries every opinion span of the sentence with its current
/// polarity. Conjunctions inside an opinion or a protected span are left
/// alone, as are those missing a non-neutral opinion on either side.
pub fn adjust_conjunctions(an: &Analysis<'_>, opinions: &[(Span, Polarity)], protected: &[Span]) -> EditPlan {
    let mut plan = EditPlan::new();
    for t in &an.tokens {
        let w = t.text.to_lowercase();
        if !matches!(w.as_str(), "and" | "but" | "yet") {
            continue;
        }
        if in_any(protected, t.span) || opinions.iter().any(|(s, _)| s.overlaps(&t.span)) {
            continue;
        }
        let before = opinions.iter().filter(|(s, _)| s.end <= t.span.start).max_by_key(|(s, _)| s.end);
        let after = opinions.iter().filter(|(s, _)| s.start >= t.span.end).min_by_key(|(s, _)| s.start);
        let (Some(&(_, left)), Some(&(_, right))) = (before, after) else { continue };
        if left.is_neutral() || right.is_neutral() {
            continue;
        }
        let want = match (left == right, w.as_str()) {
            (true, "but" | "yet") => "and",
            (false, "and") => "but",
            _ => continue,
        };
        let _ = plan.push(Edit::new(t.span, morph::match_case(t.text, want), EditTag::Conj));
    }
    plan
}

/// Put `adverb` in front of the opinion. Nothing happens when a degree
/// adverb already precedes the span or its head.
pub fn insert_adverb(
    an: &Analysis<'_>,
    opinion: Span,
    adverb: &str,
    inventory: &DegreeAdverbLexicon,
) -> Result<EditPlan, EditError> {
    let head = an.head(opinion).ok_or(EditError::NotExaggerable)?;
    if !matches!(an.tags[head], PosTag::Adjective | PosTag::Adverb) {
        return Err(EditError::NotExaggerable);
    }
    let preceded = |pos: usize| an.word_before(pos).is_some_and(|i| inventory.contains(an.tokens[i].text));
    if preceded(opinion.start) || preceded(an.tokens[head].span.start) {
        return Ok(EditPlan::new());
    }
    let adverb = if all_caps(an.tokens[head].text) { adverb.to_uppercase() } else { adverb.to_lowercase() };
    EditPlan::from_edits([Edit::insert(opinion.start, format!("{adverb} "), EditTag::Adverb)])
}

/// What the clean-up pass needs to know about the edits already applied.
#[derive(Debug, Clone, Copy)]
pub struct Polish<'a> {
    /// The text before any edit.
    pub original: &'a str,
    /// Ranges of replacement text in the current text.
    pub changed: &'a [Span],
    /// Aspect-term spans in the current text.
    pub protected: &'a [Span],
    /// Where the word that used to open the sentence now starts, when an
    /// insertion pushed it away from offset 0.
    pub displaced: Option<usize>,
}

fn wants_an(word: &str) -> bool {
    let w = word.to_lowercase();
    if ["hour", "honest", "honor", "honour", "heir"].iter().any(|p| w.starts_with(p)) {
        return true;
    }
    if ["uni", "use", "usu", "uti", "eu", "one", "once", "ur"].iter().any(|p| w.starts_with(p)) {
        return false;
    }
    w.starts_with(['a', 'e', 'i', 'o', 'u'])
}

/// Article agreement in front of changed words and sentence-initial case.
pub fn polish(text: &str, p: &Polish<'_>) -> EditPlan {
    let tokens = tokenize(text);
    let mut fixed: Vec<Option<String>> = vec![None; tokens.len()];
    let free = |i: usize| !in_any(p.protected, tokens[i].span);

    for i in 0..tokens.len().saturating_sub(1) {
        let art = tokens[i].text.to_lowercase();
        let next = tokens[i + 1];
        if !matches!(art.as_str(), "a" | "an") || !next.is_word() || !free(i) {
            continue;
        }
        let touched = p
            .changed
            .iter()
            .any(|c| c.start <= next.span.start && next.span.start < c.end.max(c.start + 1));
        if !touched {
            continue;
        }
        let want = if wants_an(next.text) { "an" } else { "a" };
        if art != want {
            fixed[i] = Some(morph::match_case(tokens[i].text, want));
        }
    }

    if let Some(pos) = p.displaced {
        if let Some(i) = tokens.iter().position(|t| t.span.start == pos) {
            let w = fixed[i].clone().unwrap_or_else(|| tokens[i].text.to_string());
            let proper = w.chars().skip(1).any(char::is_uppercase);
            if free(i) && tokens[i].is_word() && w != "I" && !w.starts_with("I'") && !proper {
                fixed[i] = Some(morph::decapitalize(&w));
            }
        }
    }

    let starts_upper = p.original.chars().next().is_some_and(char::is_uppercase);
    if let Some(first) = tokens.first() {
        let w = fixed[0].clone().unwrap_or_else(|| first.text.to_string());
        if starts_upper && first.span.start == 0 && w.chars().next().is_some_and(char::is_lowercase) && free(0) {
            fixed[0] = Some(morph::capitalize(&w));
        }
    }

    let mut plan = EditPlan::new();
    for (i, f) in fixed.into_iter().enumerate() {
        if let Some(f) = f.filter(|f| f != tokens[i].text) {
            let _ = plan.push(Edit::new(tokens[i].span, f, EditTag::Conj));
        }
    }
    plan
}
