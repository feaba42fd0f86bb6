//! English inflection: lemmatization against a lexicon and re-inflection of
//! a replacement word so it takes the shape of the word it replaces.

use super::{AntonymLexicon, PosTag};

/// Irregular past forms and their lemmas.
pub const IRREGULAR_PAST: &[(&str, &str)] = &[
    ("ate", "eat"),
    ("became", "become"),
    ("began", "begin"),
    ("bought", "buy"),
    ("broke", "break"),
    ("brought", "bring"),
    ("built", "build"),
    ("came", "come"),
    ("caught", "catch"),
    ("chose", "choose"),
    ("did", "do"),
    ("drank", "drink"),
    ("drove", "drive"),
    ("felt", "feel"),
    ("fell", "fall"),
    ("forgot", "forget"),
    ("found", "find"),
    ("gave", "give"),
    ("got", "get"),
    ("grew", "grow"),
    ("had", "have"),
    ("heard", "hear"),
    ("held", "hold"),
    ("kept", "keep"),
    ("knew", "know"),
    ("left", "leave"),
    ("lost", "lose"),
    ("made", "make"),
    ("meant", "mean"),
    ("met", "meet"),
    ("paid", "pay"),
    ("ran", "run"),
    ("sat", "sit"),
    ("said", "say"),
    ("saw", "see"),
    ("sent", "send"),
    ("sold", "sell"),
    ("spent", "spend"),
    ("stood", "stand"),
    ("took", "take"),
    ("taught", "teach"),
    ("thought", "think"),
    ("told", "tell"),
    ("understood", "understand"),
    ("went", "go"),
    ("won", "win"),
    ("wore", "wear"),
    ("wrote", "write"),
];

/// Irregular third-person singular forms.
pub const IRREGULAR_THIRD: &[(&str, &str)] = &[("has", "have"), ("does", "do"), ("goes", "go"), ("is", "be")];

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];
const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];
const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inflection {
    Base,
    /// Plural noun or third-person singular verb.
    S,
    Past,
    Gerund,
    Comparative,
    Superlative,
}

fn rules(pos: PosTag) -> &'static [(&'static str, &'static str)] {
    match pos {
        PosTag::Noun => NOUN_RULES,
        PosTag::Verb => VERB_RULES,
        PosTag::Adjective => ADJ_RULES,
        _ => &[],
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Lemmas of `word` under `pos` that the lexicon knows, in lookup order:
/// exception list, the word itself, then suffix detachment.
pub fn known_lemmas(lex: &AntonymLexicon, word: &str, pos: PosTag) -> Vec<String> {
    let word = word.to_lowercase();
    let mut out: Vec<String> = Vec::new();
    let mut push = |w: String| {
        if !out.contains(&w) {
            out.push(w);
        }
    };
    for lemma in lex.exception_lemmas(&word, pos) {
        push(lemma.clone());
    }
    if lex.has_lemma(&word, pos) {
        push(word.clone());
    }
    for (suffix, ending) in rules(pos) {
        if let Some(stem) = word.strip_suffix(suffix) {
            if stem.is_empty() {
                continue;
            }
            let candidate = format!("{stem}{ending}");
            if lex.has_lemma(&candidate, pos) {
                push(candidate);
            }
        }
    }
    out
}

/// Best-effort lemma: the first known lemma, else the built-in irregular
/// tables, else suffix heuristics.
pub fn lemmatize(lex: &AntonymLexicon, word: &str, pos: PosTag) -> String {
    if let Some(first) = known_lemmas(lex, word, pos).into_iter().next() {
        return first;
    }
    let lower = word.to_lowercase();
    if pos == PosTag::Verb {
        if let Some((_, lemma)) = IRREGULAR_PAST.iter().chain(IRREGULAR_THIRD).find(|(f, _)| *f == lower) {
            return lemma.to_string();
        }
    }
    heuristic_lemma(&lower, pos)
}

fn restore_e(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 2 && chars[n - 1] == chars[n - 2] && !is_vowel(chars[n - 1]) && !matches!(chars[n - 1], 'l' | 's' | 'z' | 'f') {
        // stopped -> stop
        return chars[..n - 1].iter().collect();
    }
    let last = chars.last().copied().unwrap_or(' ');
    let cvc = n == 3 && !is_vowel(chars[0]) && is_vowel(chars[1]) && !is_vowel(chars[2]) && !matches!(chars[2], 'w' | 'x' | 'y');
    if cvc || matches!(last, 'v' | 'c' | 'u') || (n >= 2 && last == 's' && is_vowel(chars[n - 2])) {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

fn heuristic_lemma(word: &str, pos: PosTag) -> String {
    let sibilant = |s: &str| ["s", "x", "z", "ch", "sh", "o"].iter().any(|e| s.ends_with(e));
    match pos {
        PosTag::Verb | PosTag::Noun => {
            if let Some(stem) = word.strip_suffix("ies").filter(|s| s.len() > 1) {
                return format!("{stem}y");
            }
            if pos == PosTag::Verb {
                if let Some(stem) = word.strip_suffix("ied").filter(|s| s.len() > 1) {
                    return format!("{stem}y");
                }
                if let Some(stem) = word.strip_suffix("ing").filter(|s| s.len() > 1) {
                    return restore_e(stem);
                }
                if let Some(stem) = word.strip_suffix("ed").filter(|s| s.len() > 1) {
                    return restore_e(stem);
                }
            }
            if let Some(stem) = word.strip_suffix("es").filter(|s| sibilant(s)) {
                return stem.to_string();
            }
            match word.strip_suffix('s') {
                Some(stem) if !stem.is_empty() && !stem.ends_with(['s', 'u', 'i']) => stem.to_string(),
                _ => word.to_string(),
            }
        }
        PosTag::Adjective => {
            for suffix in ["est", "er"] {
                if let Some(stem) = word.strip_suffix(suffix).filter(|s| s.len() > 2) {
                    if let Some(y) = stem.strip_suffix('i') {
                        return format!("{y}y");
                    }
                    return restore_e(stem);
                }
            }
            word.to_string()
        }
        _ => word.to_string(),
    }
}

/// Which inflection `word` carries relative to its `lemma`.
pub fn inflection_of(lex: &AntonymLexicon, word: &str, lemma: &str, pos: PosTag) -> Inflection {
    let word = word.to_lowercase();
    let lemma = lemma.to_lowercase();
    if word == lemma {
        return Inflection::Base;
    }
    match pos {
        PosTag::Verb => {
            if word.ends_with("ing") {
                Inflection::Gerund
            } else if IRREGULAR_THIRD.iter().any(|(f, _)| *f == word) || (word.ends_with('s') && !word.ends_with("ss")) {
                Inflection::S
            } else if word.ends_with("ed")
                || IRREGULAR_PAST.iter().any(|(f, _)| *f == word)
                || !lex.exception_lemmas(&word, PosTag::Verb).is_empty()
            {
                Inflection::Past
            } else {
                Inflection::Base
            }
        }
        PosTag::Noun if word.ends_with('s') || !lex.exception_lemmas(&word, PosTag::Noun).is_empty() => Inflection::S,
        PosTag::Adjective if word.ends_with("est") => Inflection::Superlative,
        PosTag::Adjective if word.ends_with("er") => Inflection::Comparative,
        _ => Inflection::Base,
    }
}

fn doubles_final(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let vowels = chars.iter().filter(|&&c| is_vowel(c)).count();
    (3..=4).contains(&n)
        && vowels == 1
        && !is_vowel(chars[n - 1])
        && is_vowel(chars[n - 2])
        && !is_vowel(chars[n - 3])
        && matches!(chars[n - 1], 'b' | 'd' | 'g' | 'm' | 'n' | 'p' | 't')
}

fn ends_consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    rev.next() == Some('y') && rev.next().is_some_and(|c| !is_vowel(c))
}

/// Inflect `lemma` into `form`. Multi-word lemmas inflect their last word.
pub fn inflect(lex: &AntonymLexicon, lemma: &str, form: Inflection, pos: PosTag) -> String {
    if let Some((head, last)) = lemma.rsplit_once(' ') {
        if matches!(form, Inflection::Comparative | Inflection::Superlative) {
            let adverb = if form == Inflection::Comparative { "more" } else { "most" };
            return format!("{adverb} {lemma}");
        }
        return format!("{head} {}", inflect(lex, last, form, pos));
    }
    let w = lemma.to_lowercase();
    let irregular = |table: &[(&str, &str)]| table.iter().find(|(_, l)| *l == w).map(|(f, _)| f.to_string());
    match form {
        Inflection::Base => w,
        Inflection::S => {
            if pos == PosTag::Verb {
                if let Some(f) = irregular(IRREGULAR_THIRD) {
                    return f;
                }
            } else if let Some(f) = lex.exception_forms(&w, PosTag::Noun).first() {
                return f.to_string();
            }
            if ["s", "x", "z", "ch", "sh"].iter().any(|e| w.ends_with(e)) || (pos == PosTag::Verb && w.ends_with('o')) {
                format!("{w}es")
            } else if ends_consonant_y(&w) {
                format!("{}ies", &w[..w.len() - 1])
            } else {
                format!("{w}s")
            }
        }
        Inflection::Past => {
            if let Some(f) = irregular(IRREGULAR_PAST) {
                return f;
            }
            if w.ends_with('e') {
                format!("{w}d")
            } else if ends_consonant_y(&w) {
                format!("{}ied", &w[..w.len() - 1])
            } else if doubles_final(&w) {
                format!("{w}{}ed", w.chars().last().unwrap())
            } else {
                format!("{w}ed")
            }
        }
        Inflection::Gerund => {
            if let Some(stem) = w.strip_suffix("ie") {
                format!("{stem}ying")
            } else if w.ends_with('e') && !w.ends_with("ee") && w.len() > 2 {
                format!("{}ing", &w[..w.len() - 1])
            } else if doubles_final(&w) {
                format!("{w}{}ing", w.chars().last().unwrap())
            } else {
                format!("{w}ing")
            }
        }
        Inflection::Comparative | Inflection::Superlative => {
            let suffix = if form == Inflection::Comparative { "er" } else { "est" };
            if let Some(f) = lex.exception_forms(&w, PosTag::Adjective).into_iter().find(|f| f.ends_with(suffix)) {
                return f.to_string();
            }
            if w.chars().count() > 6 {
                let adverb = if form == Inflection::Comparative { "more" } else { "most" };
                return format!("{adverb} {w}");
            }
            if w.ends_with('e') {
                format!("{w}{}", &suffix[1..])
            } else if ends_consonant_y(&w) {
                format!("{}i{suffix}", &w[..w.len() - 1])
            } else if doubles_final(&w) {
                format!("{w}{}{suffix}", w.chars().last().unwrap())
            } else {
                format!("{w}{suffix}")
            }
        }
    }
}

/// Give `word` the case pattern of `template`: all caps, capitalized, or
/// left as is.
pub fn match_case(template: &str, word: &str) -> String {
    let letters: Vec<char> = template.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return word.to_uppercase();
    }
    if template.chars().next().is_some_and(char::is_uppercase) {
        return capitalize(word);
    }
    word.to_string()
}

pub fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub fn decapitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_tsv_lexicon;

    fn lex() -> AntonymLexicon {
        let mut lex = load_tsv_lexicon(b"change\tverb\nlove\tverb\thate\npoor\tadj\trich\n").unwrap();
        lex.add_exception(PosTag::Verb, "went", "go");
        lex
    }

    #[test]
    fn lemmas_via_lexicon() {
        let lex = lex();
        assert_eq!(lemmatize(&lex, "changes", PosTag::Verb), "change");
        assert_eq!(lemmatize(&lex, "loved", PosTag::Verb), "love");
        assert_eq!(lemmatize(&lex, "went", PosTag::Verb), "go");
        assert_eq!(lemmatize(&lex, "poorest", PosTag::Adjective), "poor");
    }

    #[test]
    fn heuristic_lemmas() {
        let lex = AntonymLexicon::new();
        for (word, lemma) in [
            ("changes", "change"),
            ("loved", "love"),
            ("stopped", "stop"),
            ("wanted", "want"),
            ("tries", "try"),
            ("made", "make"),
            ("works", "work"),
            ("fixes", "fix"),
            ("making", "make"),
            ("served", "serve"),
        ] {
            assert_eq!(lemmatize(&lex, word, PosTag::Verb), lemma, "{word}");
        }
    }

    #[test]
    fn inflection_round_trip() {
        let lex = lex();
        let cases = [
            ("changes", "change", Inflection::S),
            ("loved", "love", Inflection::Past),
            ("loving", "love", Inflection::Gerund),
            ("went", "go", Inflection::Past),
        ];
        for (word, lemma, form) in cases {
            assert_eq!(inflection_of(&lex, word, lemma, PosTag::Verb), form, "{word}");
            assert_eq!(inflect(&lex, lemma, form, PosTag::Verb), word, "{word}");
        }
        assert_eq!(inflect(&lex, "hate", Inflection::Past, PosTag::Verb), "hated");
        assert_eq!(inflect(&lex, "rich", Inflection::Superlative, PosTag::Adjective), "richest");
        assert_eq!(inflect(&lex, "pretty", Inflection::Comparative, PosTag::Adjective), "prettier");
        assert_eq!(
            inflect(&lex, "unreasonable", Inflection::Comparative, PosTag::Adjective),
            "more unreasonable"
        );
        assert_eq!(inflect(&lex, "battery", Inflection::S, PosTag::Noun), "batteries");
    }

    #[test]
    fn case_copying() {
        assert_eq!(match_case("Tasty", "terrible"), "Terrible");
        assert_eq!(match_case("GREAT", "awful"), "AWFUL");
        assert_eq!(match_case("light", "heavy"), "heavy");
        assert_eq!(match_case("A", "an"), "An");
    }
}
