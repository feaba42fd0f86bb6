use super::{AntonymLexicon, LexiconError, PosTag};

/// Load `lemma<TAB>pos<TAB>antonym` lines.
///
/// A two-field line `lemma<TAB>pos` registers the lemma under that POS
/// without an antonym, which lets a hand-written lexicon steer the fallback
/// tagger. Blank lines and `#` comments are skipped.
pub fn load_tsv_lexicon(input: &[u8]) -> Result<AntonymLexicon, LexiconError> {
    let text = std::str::from_utf8(input).map_err(|e| LexiconError::Line {
        line: input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "invalid UTF-8".into(),
    })?;
    let mut lex = AntonymLexicon::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let pos: PosTag = fields
            .get(1)
            .ok_or_else(|| LexiconError::Line {
                line,
                message: "expected lemma<TAB>pos<TAB>antonym".into(),
            })?
            .parse()
            .map_err(|message| LexiconError::Line { line, message })?;
        match fields.as_slice() {
            [lemma, _] | [lemma, _, ""] => lex.add_lemma(pos, lemma),
            [lemma, _, antonym] => lex.add_pair(pos, lemma, antonym),
            _ => {
                return Err(LexiconError::Line {
                    line,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                })
            }
        }
    }
    Ok(lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_closure() {
        let lex = load_tsv_lexicon(b"tasty\tadjective\tterrible\n").unwrap();
        assert_eq!(lex.antonyms("tasty", PosTag::Adjective), ["terrible"]);
        assert_eq!(lex.antonyms("terrible", PosTag::Adjective), ["tasty"]);
    }

    #[test]
    fn empty_file_is_usable() {
        let lex = load_tsv_lexicon(b"").unwrap();
        assert!(lex.is_empty());
        assert!(lex.antonyms("good", PosTag::Adjective).is_empty());
    }

    #[test]
    fn duplicates_collapse() {
        let lex = load_tsv_lexicon(b"good\tadj\tbad\ngood\tadjective\tbad\nbad\ta\tgood\n").unwrap();
        assert_eq!(lex.antonyms("good", PosTag::Adjective), ["bad"]);
        assert_eq!(lex.antonym_entry_count(), 2);
    }

    #[test]
    fn bad_pos_reports_line() {
        match load_tsv_lexicon(b"good\tadj\tbad\nfast\tquick\tslow\n") {
            Err(LexiconError::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pos_only_lines_register_lemmas() {
        let lex = load_tsv_lexicon(b"# comment\nchange\tverb\n").unwrap();
        assert!(lex.has_lemma("change", PosTag::Verb));
        assert!(lex.antonyms("change", PosTag::Verb).is_empty());
    }
}
