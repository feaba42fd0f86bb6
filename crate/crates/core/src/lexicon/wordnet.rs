//! Reader for the WordNet database (WNDB) files.
//!
//! Only what antonym lookup needs is read: synset words and their lexical
//! `!` pointers from `data.*`, lemma membership from `index.*`, and the
//! irregular forms from `*.exc`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{AntonymLexicon, LexiconError, PosTag};

const FILES: [(&str, PosTag); 4] = [
    ("adj", PosTag::Adjective),
    ("verb", PosTag::Verb),
    ("noun", PosTag::Noun),
    ("adv", PosTag::Adverb),
];

struct Pointer {
    source_word: usize,
    target_file: &'static str,
    target_offset: u64,
    target_word: usize,
}

struct Synset {
    words: Vec<String>,
    antonyms: Vec<Pointer>,
}

fn read(path: &Path) -> Result<String, LexiconError> {
    if !path.exists() {
        return Err(LexiconError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Lines with their byte offsets, license header (two leading spaces) skipped.
fn records(content: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    content.split_inclusive('\n').filter_map(move |raw| {
        let at = offset;
        offset += raw.len();
        let line = raw.trim_end_matches(['\n', '\r']);
        (!line.starts_with("  ") && !line.trim().is_empty()).then_some((at, line))
    })
}

fn pointer_file(pos: &str) -> Option<&'static str> {
    match pos {
        "a" | "s" => Some("adj"),
        "v" => Some("verb"),
        "n" => Some("noun"),
        "r" => Some("adv"),
        _ => None,
    }
}

/// Strip an adjective syntactic marker such as `(a)`, `(p)` or `(ip)`.
fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

fn parse_data_line(line: &str) -> Result<(u64, Synset), String> {
    let (body, _gloss) = line.split_once(" | ").unwrap_or((line, ""));
    let fields: Vec<&str> = body.split_whitespace().collect();
    let get = |i: usize| fields.get(i).copied().ok_or_else(|| format!("record truncated at field {i}"));
    let offset: u64 = get(0)?.parse().map_err(|_| "bad synset offset".to_string())?;
    let w_cnt = usize::from_str_radix(get(3)?, 16).map_err(|_| "bad word count".to_string())?;
    let mut words = Vec::with_capacity(w_cnt);
    let mut i = 4;
    for _ in 0..w_cnt {
        words.push(strip_marker(get(i)?).to_string());
        i += 2;
    }
    let p_cnt: usize = get(i)?.parse().map_err(|_| "bad pointer count".to_string())?;
    i += 1;
    let mut antonyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = get(i)?;
        let target_offset: u64 = get(i + 1)?.parse().map_err(|_| "bad pointer offset".to_string())?;
        let target_pos = get(i + 2)?;
        let source_target = get(i + 3)?;
        i += 4;
        if symbol != "!" {
            continue;
        }
        if source_target.len() != 4 {
            return Err(format!("bad pointer source/target {source_target:?}"));
        }
        let source_word = usize::from_str_radix(&source_target[..2], 16).map_err(|_| "bad pointer source")?;
        let target_word = usize::from_str_radix(&source_target[2..], 16).map_err(|_| "bad pointer target")?;
        let target_file = pointer_file(target_pos).ok_or_else(|| format!("bad pointer POS {target_pos:?}"))?;
        antonyms.push(Pointer {
            source_word,
            target_file,
            target_offset,
            target_word,
        });
    }
    Ok((offset, Synset { words, antonyms }))
}

/// Load a WordNet 3.x dictionary directory.
pub fn load_wordnet(dir: impl AsRef<Path>) -> Result<AntonymLexicon, LexiconError> {
    let dir = dir.as_ref();
    let mut lex = AntonymLexicon::new();
    let mut synsets: HashMap<&'static str, HashMap<u64, Synset>> = HashMap::new();

    for (name, pos) in FILES {
        let path: PathBuf = dir.join(format!("data.{name}"));
        let content = read(&path)?;
        let mut by_offset = HashMap::new();
        for (at, line) in records(&content) {
            let (offset, synset) = parse_data_line(line).map_err(|message| LexiconError::Record {
                path: path.clone(),
                offset: at,
                message,
            })?;
            for w in &synset.words {
                lex.add_lemma(pos, w);
            }
            by_offset.insert(offset, synset);
        }
        synsets.insert(name, by_offset);

        let path = dir.join(format!("index.{name}"));
        let content = read(&path)?;
        for (at, line) in records(&content) {
            let lemma = line.split_whitespace().next().ok_or_else(|| LexiconError::Record {
                path: path.clone(),
                offset: at,
                message: "empty index record".into(),
            })?;
            lex.add_lemma(pos, lemma);
        }

        let path = dir.join(format!("{name}.exc"));
        let content = read(&path)?;
        for (at, line) in records(&content) {
            let mut parts = line.split_whitespace();
            let inflected = parts.next();
            let lemmas: Vec<&str> = parts.collect();
            match (inflected, lemmas.is_empty()) {
                (Some(inflected), false) => {
                    for lemma in lemmas {
                        lex.add_exception(pos, inflected, lemma);
                    }
                }
                _ => {
                    return Err(LexiconError::Record {
                        path: path.clone(),
                        offset: at,
                        message: "exception record needs a form and a lemma".into(),
                    })
                }
            }
        }
    }

    for (name, pos) in FILES {
        for synset in synsets[name].values() {
            for ptr in &synset.antonyms {
                let source = ptr.source_word.checked_sub(1).and_then(|i| synset.words.get(i));
                let target = synsets
                    .get(ptr.target_file)
                    .and_then(|m| m.get(&ptr.target_offset))
                    .and_then(|t| ptr.target_word.checked_sub(1).and_then(|i| t.words.get(i)));
                if let (Some(a), Some(b)) = (source, target) {
                    lex.add_pair(pos, a, b);
                }
            }
        }
    }
    Ok(lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wndb")
    }

    #[test]
    fn table_two_antonyms() {
        let lex = load_wordnet(fixture()).unwrap();
        assert!(lex.antonyms("light", PosTag::Adjective).contains(&"heavy"));
        assert!(lex.antonyms("easy", PosTag::Adjective).contains(&"difficult"));
        assert!(lex.antonyms("love", PosTag::Verb).contains(&"hate"));
        assert!(lex.antonyms("light", PosTag::Verb).is_empty());
    }

    #[test]
    fn symmetric_over_all_pointers() {
        let lex = load_wordnet(fixture()).unwrap();
        // oracle: rescan the raw pointers and check both directions are stored
        let mut raw = Vec::new();
        for (name, pos) in FILES {
            let content = fs::read_to_string(fixture().join(format!("data.{name}"))).unwrap();
            let mut words = HashMap::new();
            let mut ptrs = Vec::new();
            for (_, line) in records(&content) {
                let (off, s) = parse_data_line(line).unwrap();
                for p in &s.antonyms {
                    ptrs.push((s.words[p.source_word - 1].replace('_', " "), p.target_offset, p.target_word));
                }
                words.insert(off, s.words);
            }
            for (a, off, tw) in ptrs {
                raw.push((pos, a, words[&off][tw - 1].replace('_', " ")));
            }
        }
        assert!(!raw.is_empty());
        for (pos, a, b) in &raw {
            assert!(lex.antonyms(a, *pos).contains(&b.as_str()), "{a} -> {b}");
            assert!(lex.antonyms(b, *pos).contains(&a.as_str()), "{b} -> {a}");
        }
        for (pos, a, b) in lex.pairs() {
            assert!(lex.antonyms(b, pos).contains(&a));
        }
    }

    #[test]
    fn membership_and_exceptions() {
        let lex = load_wordnet(fixture()).unwrap();
        assert!(lex.has_lemma("tasty", PosTag::Adjective));
        assert!(lex.has_lemma("change", PosTag::Verb));
        assert!(lex.has_lemma("change", PosTag::Noun));
        assert_eq!(lex.exception_lemmas("went", PosTag::Verb), ["go"]);
        assert!(lex.antonyms("ill at ease", PosTag::Adjective).contains(&"at ease"));
    }

    #[test]
    fn missing_file_named() {
        let dir = std::env::temp_dir().join(format!("wndb-missing-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        match load_wordnet(&dir) {
            Err(LexiconError::MissingFile(p)) => assert!(p.ends_with("data.adj")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corrupt_record_reports_byte_offset() {
        let dir = std::env::temp_dir().join(format!("wndb-corrupt-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        for entry in fs::read_dir(fixture()).unwrap() {
            let entry = entry.unwrap();
            fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
        }
        let good = fs::read_to_string(dir.join("data.adj")).unwrap();
        let bad_at = good.len();
        fs::write(dir.join("data.adj"), format!("{good}00099999 00 a zz broken\n")).unwrap();
        match load_wordnet(&dir) {
            Err(LexiconError::Record { offset, path, .. }) => {
                assert_eq!(offset, bad_at);
                assert!(path.ends_with("data.adj"));
            }
            other => panic!("{other:?}"),
        }
    }
}
