use std::collections::HashSet;
use std::fmt::Write as _;

use super::StrategyError;
use crate::corpus::{tokenize, AspectInstance, Dataset, Opinion, Polarity, Sentence};
use crate::lexicon::morph::decapitalize;

const BE_FORMS: &[&str] = &["is", "are", "was", "were", "am", "be", "been", "being"];
const CLAUSE_BREAKS: &[&str] = &["and", "but", "or", "yet", "so", "because", "while", "although", "though"];

/// An aspect term together with a short clause expressing sentiment on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AspectExpression {
    pub aspect_term: String,
    pub expression: String,
    pub polarity: Polarity,
}

/// Pool of aspect expressions for AddDiff sampling, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AspectSet {
    expressions: Vec<AspectExpression>,
}

impl AspectSet {
    /// Neutral expressions and expressions not containing their term are
    /// dropped; duplicates keep their first occurrence.
    pub fn new(expressions: impl IntoIterator<Item = AspectExpression>) -> Self {
        let mut set = AspectSet::default();
        set.extend(expressions);
        set
    }

    pub fn extend(&mut self, expressions: impl IntoIterator<Item = AspectExpression>) {
        let mut seen: HashSet<(String, String)> = self
            .expressions
            .iter()
            .map(|e| (e.aspect_term.clone(), e.expression.clone()))
            .collect();
        for e in expressions {
            if e.polarity.is_neutral() || !e.expression.contains(&e.aspect_term) {
                continue;
            }
            if seen.insert((e.aspect_term.clone(), e.expression.clone())) {
                self.expressions.push(e);
            }
        }
    }

    pub fn expressions(&self) -> &[AspectExpression] {
        &self.expressions
    }

    pub fn with_polarity(&self, polarity: Polarity) -> impl Iterator<Item = &AspectExpression> {
        self.expressions.iter().filter(move |e| e.polarity == polarity)
    }

    pub fn len(&self) -> usize {
        self.expressions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expressions.is_empty()
    }

    /// `aspect_term<TAB>expression<TAB>polarity` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.expressions {
            let _ = writeln!(out, "{}\t{}\t{}", e.aspect_term, e.expression, e.polarity);
        }
        out
    }

    pub fn from_tsv(input: &str) -> Result<Self, StrategyError> {
        let mut expressions = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            let [term, expression, polarity] = fields.as_slice() else {
                return Err(StrategyError::Line {
                    line,
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            };
            let polarity: Polarity = polarity.trim().parse().map_err(|e: crate::corpus::UnknownPolarity| {
                StrategyError::Line {
                    line,
                    message: e.to_string(),
                }
            })?;
            if polarity.is_neutral() {
                return Err(StrategyError::Line {
                    line,
                    message: "neutral expressions are not allowed".into(),
                });
            }
            if !expression.contains(term) {
                return Err(StrategyError::Line {
                    line,
                    message: format!("expression {expression:?} does not contain {term:?}"),
                });
            }
            expressions.push(AspectExpression {
                aspect_term: term.to_string(),
                expression: expression.to_string(),
                polarity,
            });
        }
        let set = AspectSet::new(expressions);
        if set.is_empty() {
            return Err(StrategyError::EmptyAspectSet);
        }
        Ok(set)
    }
}

/// Harvest expressions from every annotated (aspect, opinion) pair of
/// `datasets`.
pub fn build_aspect_set<'a>(datasets: impl IntoIterator<Item = &'a Dataset>) -> Result<AspectSet, StrategyError> {
    let mut set = AspectSet::default();
    for ds in datasets {
        for sentence in &ds.sentences {
            for aspect in &sentence.aspects {
                let exprs = aspect
                    .opinions
                    .iter()
                    .filter(|o| !o.polarity.is_neutral())
                    .map(|o| render(sentence, aspect, o));
                set.extend(exprs.collect::<Vec<_>>());
            }
        }
    }
    if set.is_empty() {
        return Err(StrategyError::EmptyAspectSet);
    }
    Ok(set)
}

fn lower_initial(s: &str) -> String {
    let first_word = s.split_whitespace().next().unwrap_or("");
    let proper = first_word.chars().skip(1).any(char::is_uppercase);
    if proper {
        s.to_string()
    } else {
        decapitalize(s)
    }
}

/// The source slice "term is (adv) opinion" when the sentence has that
/// shape, else the template "term is/are opinion".
fn render(sentence: &Sentence, aspect: &AspectInstance, opinion: &Opinion) -> AspectExpression {
    let text = &sentence.text;
    let term = aspect.term_span;
    let between: Vec<_> = tokenize(text)
        .into_iter()
        .filter(|t| t.span.start >= term.end && t.span.end <= opinion.span.start)
        .collect();
    let copula = term.end <= opinion.span.start
        && between.len() <= 3
        && between
            .first()
            .is_some_and(|t| BE_FORMS.contains(&t.text.to_lowercase().as_str()))
        && between
            .iter()
            .all(|t| t.is_word() && !CLAUSE_BREAKS.contains(&t.text.to_lowercase().as_str()));
    let mut term_text = aspect.term.clone();
    let expression = if copula {
        text[term.start..opinion.span.end].to_string()
    } else {
        let plural = term_text.ends_with('s') && !["ss", "us", "is"].iter().any(|e| term_text.ends_with(e));
        let verb = if plural { "are" } else { "is" };
        let words = opinion.span.slice(text);
        let words = if opinion.span.start == 0 { lower_initial(words) } else { words.to_string() };
        format!("{term_text} {verb} {words}")
    };
    let expression = if term.start == 0 {
        let lowered = lower_initial(&expression);
        term_text = lower_initial(&term_text);
        lowered
    } else {
        expression
    };
    AspectExpression {
        aspect_term: term_text,
        expression,
        polarity: opinion.polarity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DatasetMeta;

    fn set_of(sentences: Vec<Sentence>) -> AspectSet {
        build_aspect_set([&Dataset::with_sentences(&DatasetMeta::default(), sentences).unwrap()]).unwrap()
    }

    #[test]
    fn copula_slice() {
        let s = Sentence::new("s", "the service is severely slow")
            .with_aspect("0", "service", Polarity::Negative)
            .with_opinion("0", "slow", Polarity::Negative);
        let set = set_of(vec![s]);
        assert_eq!(set.expressions()[0].expression, "service is severely slow");
        assert_eq!(set.expressions()[0].polarity, Polarity::Negative);
    }

    #[test]
    fn template_with_agreement() {
        let s = Sentence::new("s", "Desserts: out of this world.")
            .with_aspect("0", "Desserts", Polarity::Positive)
            .with_opinion("0", "out of this world", Polarity::Positive);
        let t = Sentence::new("t", "Great menu and the glass is great.")
            .with_aspect("0", "menu", Polarity::Positive)
            .with_opinion("0", "Great", Polarity::Positive);
        let set = set_of(vec![s, t]);
        let got: Vec<_> = set.expressions().iter().map(|e| e.expression.as_str()).collect();
        assert_eq!(got, ["desserts are out of this world", "menu is great"]);
        assert_eq!(set.expressions()[0].aspect_term, "desserts");
    }

    #[test]
    fn neutral_contributes_nothing() {
        let s = Sentence::new("s", "The bill is fine.")
            .with_aspect("0", "bill", Polarity::Neutral)
            .with_opinion("0", "fine", Polarity::Neutral);
        let ds = Dataset::with_sentences(&DatasetMeta::default(), vec![s]).unwrap();
        assert_eq!(build_aspect_set([&ds]), Err(StrategyError::EmptyAspectSet));
    }

    #[test]
    fn dedupe_and_tsv() {
        let s = |id: &str| {
            Sentence::new(id, "the staff was rude")
                .with_aspect("0", "staff", Polarity::Negative)
                .with_opinion("0", "rude", Polarity::Negative)
        };
        let set = set_of(vec![s("a"), s("b")]);
        assert_eq!(set.len(), 1);
        assert_eq!(AspectSet::from_tsv(&set.to_tsv()).unwrap(), set);
        assert!(AspectSet::from_tsv("staff\tfood is bad\tnegative\n").is_err());
        assert!(AspectSet::from_tsv("staff\tstaff ok\tneutral\n").is_err());
    }
}
