use super::morph::{known_lemmas, IRREGULAR_PAST, IRREGULAR_THIRD};
use super::{AntonymLexicon, PosTag};
use crate::corpus::{Span, Token};

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every", "no", "all", "both",
    "either", "neither", "another", "such",
];
const CONJUNCTIONS: &[&str] = &[
    "and", "but", "or", "nor", "yet", "so", "for", "although", "though", "because", "since", "unless", "while",
    "whereas", "if", "than",
];
const PRONOUNS: &[&str] = &[
    "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "we", "us", "our", "ours", "ourselves", "they", "them",
    "their", "theirs", "themselves", "who", "whom", "whose", "which", "what", "there",
];
pub(crate) const AUXILIARIES: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "can", "could", "will", "would", "shall", "should",
    "may", "might", "must", "ca", "wo", "isn't", "aren't", "wasn't", "weren't", "can't", "won't",
];
const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "to", "with", "by", "from", "about", "into", "over", "under", "after", "before",
    "between", "through", "during", "without", "within", "against", "among", "per", "via", "as", "up", "out",
    "off", "down",
];

/// Determiners, conjunctions, pronouns, auxiliaries and prepositions.
pub fn is_closed_class(word: &str) -> bool {
    let w = word.to_lowercase();
    [DETERMINERS, CONJUNCTIONS, PRONOUNS, AUXILIARIES, PREPOSITIONS]
        .iter()
        .any(|list| list.contains(&w.as_str()))
}

/// POS of a single token. A provided tag always wins; otherwise closed-class
/// lists, then lexicon membership (adjective > verb > noun > adverb) and
/// the built-in irregular verb forms, then suffix rules, then noun.
pub fn pos_of(lex: &AntonymLexicon, token: &str, provided: Option<PosTag>) -> PosTag {
    if let Some(tag) = provided {
        return tag;
    }
    if !token.chars().any(char::is_alphabetic) {
        return PosTag::Other;
    }
    let w = token.to_lowercase();
    if is_closed_class(&w) {
        return PosTag::Other;
    }
    if let Some(pos) = PosTag::OPEN.into_iter().find(|&p| !known_lemmas(lex, &w, p).is_empty()) {
        return pos;
    }
    if IRREGULAR_PAST.iter().chain(IRREGULAR_THIRD).any(|(form, _)| *form == w) {
        return PosTag::Verb;
    }
    if w.ends_with("ly") {
        PosTag::Adverb
    } else if ["ous", "ful", "able", "ive"].iter().any(|s| w.ends_with(s)) {
        PosTag::Adjective
    } else if ["ize", "ate"].iter().any(|s| w.ends_with(s)) {
        PosTag::Verb
    } else {
        PosTag::Noun
    }
}

/// Tag every token, using `provided` tags where given.
pub fn tag_tokens(lex: &AntonymLexicon, tokens: &[Token<'_>], provided: Option<&[PosTag]>) -> Vec<PosTag> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, t)| pos_of(lex, t.text, provided.and_then(|p| p.get(i).copied())))
        .collect()
}

/// Index of the head token of an opinion span: the last adjective, else the
/// first verb, else the last word token inside the span.
pub fn opinion_head(tokens: &[Token<'_>], tags: &[PosTag], span: Span) -> Option<usize> {
    let inside: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].is_word() && span.contains(&tokens[i].span))
        .collect();
    inside
        .iter()
        .rev()
        .find(|&&i| tags[i] == PosTag::Adjective)
        .or_else(|| inside.iter().find(|&&i| tags[i] == PosTag::Verb))
        .or_else(|| inside.last())
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::lexicon::{load_tsv_lexicon, load_wordnet};

    fn wordnet() -> AntonymLexicon {
        load_wordnet(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wndb")).unwrap()
    }

    #[test]
    fn membership_tags() {
        let lex = wordnet();
        // oracle: the adjective file lists tasty, no other file does
        assert!(lex.has_lemma("tasty", PosTag::Adjective));
        assert!(!lex.has_lemma("tasty", PosTag::Noun));
        assert_eq!(pos_of(&lex, "tasty", None), PosTag::Adjective);
        // change is a verb and a noun; verb wins the tie
        assert_eq!(pos_of(&lex, "changes", None), PosTag::Verb);
        assert_eq!(pos_of(&lex, "light", None), PosTag::Adjective);
    }

    #[test]
    fn closed_class_and_suffixes() {
        let lex = AntonymLexicon::new();
        assert_eq!(pos_of(&lex, "and", None), PosTag::Other);
        assert_eq!(pos_of(&lex, "The", None), PosTag::Other);
        assert_eq!(pos_of(&lex, ",", None), PosTag::Other);
        let table = [
            ("quickly", PosTag::Adverb),
            ("delicious", PosTag::Adjective),
            ("wonderful", PosTag::Adjective),
            ("affordable", PosTag::Adjective),
            ("expensive", PosTag::Adjective),
            ("optimize", PosTag::Verb),
            ("operate", PosTag::Verb),
            ("screen", PosTag::Noun),
        ];
        for (word, tag) in table {
            assert_eq!(pos_of(&lex, word, None), tag, "{word}");
        }
    }

    #[test]
    fn provided_tag_wins() {
        let lex = AntonymLexicon::new();
        assert_eq!(pos_of(&lex, "and", Some(PosTag::Noun)), PosTag::Noun);
    }

    #[test]
    fn head_selection() {
        let lex = load_tsv_lexicon(b"good\tadj\tbad\nlove\tverb\thate\n").unwrap();
        let text = "out of this world good";
        let tokens = tokenize(text);
        let tags = tag_tokens(&lex, &tokens, None);
        assert_eq!(opinion_head(&tokens, &tags, Span::new(0, text.len())), Some(4));
        let tokens = tokenize("love the place");
        let tags = tag_tokens(&lex, &tokens, None);
        assert_eq!(opinion_head(&tokens, &tags, Span::new(0, 14)), Some(0));
        let tokens = tokenize("a 2-hour wait");
        let tags = tag_tokens(&lex, &tokens, None);
        assert_eq!(opinion_head(&tokens, &tags, Span::new(0, 13)).map(|i| tokens[i].text), Some("wait"));
    }
}
