use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub span: Span,
}

impl Token<'_> {
    pub fn is_word(&self) -> bool {
        self.text.chars().next().is_some_and(is_word_char)
    }

    pub fn is_punct(&self) -> bool {
        !self.is_word()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Split text into word tokens and single punctuation marks.
///
/// A word is a maximal run of letters and digits, where an apostrophe
/// flanked by word characters stays inside the word (`don't`, `It's`).
/// Every other non-whitespace character is a token of its own. Offsets are
/// bytes into `text`, so no detokenization is ever needed.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        if is_word_char(c) {
            while j < chars.len() {
                let cj = chars[j].1;
                if is_word_char(cj) {
                    j += 1;
                } else if is_apostrophe(cj) && chars.get(j + 1).is_some_and(|&(_, n)| is_word_char(n)) {
                    j += 2;
                } else {
                    break;
                }
            }
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        tokens.push(Token {
            text: &text[start..end],
            span: Span::new(start, end),
        });
        i = j;
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(text: &str) -> Vec<&str> {
        tokenize(text).iter().map(|t| t.text).collect()
    }

    /// Independent character-class scan: classify each char, then group.
    fn oracle(text: &str) -> Vec<(usize, usize)> {
        let cs: Vec<(usize, char)> = text.char_indices().collect();
        // class 0 = space, 1 = word, 2 = punct; apostrophes between words become words
        let mut class: Vec<u8> = cs
            .iter()
            .map(|&(_, c)| if c.is_whitespace() { 0 } else if c.is_alphanumeric() { 1 } else { 2 })
            .collect();
        for k in 1..cs.len().saturating_sub(1) {
            if (cs[k].1 == '\'' || cs[k].1 == '\u{2019}') && class[k - 1] == 1 && cs[k + 1].1.is_alphanumeric() {
                class[k] = 1;
            }
        }
        let mut out = Vec::new();
        let mut k = 0;
        while k < cs.len() {
            match class[k] {
                0 => k += 1,
                2 => {
                    let end = cs.get(k + 1).map_or(text.len(), |c| c.0);
                    out.push((cs[k].0, end));
                    k += 1;
                }
                _ => {
                    let mut m = k;
                    while m < cs.len() && class[m] == 1 {
                        m += 1;
                    }
                    let end = cs.get(m).map_or(text.len(), |c| c.0);
                    out.push((cs[k].0, end));
                    k = m;
                }
            }
        }
        out
    }

    #[test]
    fn table_one_sentence() {
        let text = "Tasty burgers, and crispy fries.";
        let toks = tokenize(text);
        assert_eq!(texts(text), ["Tasty", "burgers", ",", "and", "crispy", "fries", "."]);
        let spans: Vec<_> = toks.iter().map(|t| (t.span.start, t.span.end)).collect();
        assert_eq!(spans, oracle(text));
        assert_eq!(spans[1], (6, 13));
    }

    #[test]
    fn empty_and_contractions() {
        assert!(tokenize("").is_empty());
        assert_eq!(texts("don't"), ["don't"]);
        assert_eq!(texts("It's light"), ["It's", "light"]);
        assert_eq!(texts("'quoted'"), ["'", "quoted", "'"]);
        assert_eq!(texts("a 2-hour wait"), ["a", "2", "-", "hour", "wait"]);
    }

    proptest! {
        #[test]
        fn lossless_and_matches_oracle(text in "[a-zA-Zé' ,.!?\\-0-9\u{2019}]{0,40}") {
            let toks = tokenize(&text);
            let spans: Vec<_> = toks.iter().map(|t| (t.span.start, t.span.end)).collect();
            prop_assert_eq!(&spans, &oracle(&text));
            // strictly increasing, non-overlapping, gaps are whitespace
            let mut cursor = 0;
            for t in &toks {
                prop_assert!(t.span.start >= cursor);
                prop_assert!(text[cursor..t.span.start].chars().all(char::is_whitespace));
                prop_assert_eq!(t.text, &text[t.span.start..t.span.end]);
                cursor = t.span.end;
            }
            prop_assert!(text[cursor..].chars().all(char::is_whitespace));
        }
    }
}
