//! Opinion-word annotations, one span per line:
//! `sentence_id<TAB>aspect_id<TAB>opinion_from<TAB>opinion_to<TAB>opinion_polarity`.
//! Offsets count characters. A leading header row is skipped.

use std::collections::{BTreeSet, HashMap};

use super::{char_span_to_bytes, validate_opinions, CorpusError, Dataset, Opinion, Polarity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpinionRecord {
    pub sentence_id: String,
    pub aspect_id: String,
    pub from: usize,
    pub to: usize,
    pub polarity: Polarity,
}

pub fn parse_opinion_tsv(input: &[u8]) -> Result<Vec<OpinionRecord>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 1;
        let row = row.map_err(|e| CorpusError::Schema {
            line,
            message: e.to_string(),
        })?;
        if idx == 0 && row.get(0) == Some("sentence_id") {
            continue;
        }
        if row.len() == 1 && row[0].trim().is_empty() {
            continue;
        }
        if row.len() != 5 {
            return Err(CorpusError::Schema {
                line,
                message: format!("expected 5 tab-separated fields, found {}", row.len()),
            });
        }
        let number = |i: usize, name: &str| {
            row[i].trim().parse::<usize>().map_err(|_| CorpusError::Schema {
                line,
                message: format!("{name} {:?} is not an offset", &row[i]),
            })
        };
        records.push(OpinionRecord {
            sentence_id: row[0].to_string(),
            aspect_id: row[1].to_string(),
            from: number(2, "opinion_from")?,
            to: number(3, "opinion_to")?,
            polarity: row[4].parse().map_err(|e: super::UnknownPolarity| CorpusError::Schema {
                line,
                message: e.to_string(),
            })?,
        });
    }
    Ok(records)
}

/// Attach opinion spans to the aspects they reference.
///
/// References to conflict-labelled aspects are accepted and dropped, since
/// those aspects are removed before generation anyway. Any other unknown
/// `(sentence_id, aspect_id)` pair fails the whole attachment.
pub fn attach_opinions(mut ds: Dataset, annotations: &[u8]) -> Result<Dataset, CorpusError> {
    let records = parse_opinion_tsv(annotations)?;
    let index: HashMap<&str, usize> = ds
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| (s.sentence_id.as_str(), i))
        .collect();

    let mut dangling = BTreeSet::new();
    let mut placements = Vec::new();
    for rec in &records {
        let Some(&si) = index.get(rec.sentence_id.as_str()) else {
            dangling.insert(format!("{}/{}", rec.sentence_id, rec.aspect_id));
            continue;
        };
        let sentence = &ds.sentences[si];
        match sentence.aspects.iter().position(|a| a.aspect_id == rec.aspect_id) {
            Some(ai) => placements.push((si, ai, rec)),
            None => {
                let is_conflict = ds
                    .conflicts
                    .get(&rec.sentence_id)
                    .is_some_and(|cs| cs.iter().any(|c| c.aspect_id == rec.aspect_id));
                if !is_conflict {
                    dangling.insert(format!("{}/{}", rec.sentence_id, rec.aspect_id));
                }
            }
        }
    }
    if !dangling.is_empty() {
        return Err(CorpusError::DanglingOpinions {
            keys: dangling.into_iter().collect(),
        });
    }

    for (si, ai, rec) in placements {
        let sentence = &mut ds.sentences[si];
        let span = char_span_to_bytes(&sentence.text, rec.from, rec.to).ok_or_else(|| CorpusError::Validation {
            sentence_ids: vec![rec.sentence_id.clone()],
            message: format!("opinion ({},{}) out of bounds", rec.from, rec.to),
        })?;
        let opinions = &mut sentence.aspects[ai].opinions;
        let op = Opinion {
            span,
            polarity: rec.polarity,
        };
        if !opinions.contains(&op) {
            opinions.push(op);
        }
    }
    for sentence in &mut ds.sentences {
        for aspect in &mut sentence.aspects {
            aspect.opinions.sort_by_key(|o| o.span);
        }
    }
    for sentence in &ds.sentences {
        for aspect in &sentence.aspects {
            validate_opinions(sentence, aspect)?;
        }
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DatasetMeta, Sentence, Span};

    fn dataset() -> Dataset {
        Dataset::with_sentences(
            &DatasetMeta::default(),
            vec![
                Sentence::new("s1", "Tasty burgers, and crispy fries.")
                    .with_aspect("a1", "burgers", Polarity::Positive)
                    .with_aspect("a2", "fries", Polarity::Positive),
                Sentence::new("s2", "The wine list is long."),
            ],
        )
        .unwrap()
    }

    #[test]
    fn attaches_table_one_opinion() {
        let ds = attach_opinions(dataset(), b"s1\ta1\t0\t5\tpositive\n").unwrap();
        let a1 = ds.sentences[0].aspect("a1").unwrap();
        assert_eq!(a1.opinions, vec![Opinion { span: Span::new(0, 5), polarity: Polarity::Positive }]);
        assert_eq!(a1.opinions[0].span.slice(&ds.sentences[0].text), "Tasty");
        assert!(ds.sentences[0].aspect("a2").unwrap().opinions.is_empty());
    }

    #[test]
    fn empty_stream_is_noop() {
        assert_eq!(attach_opinions(dataset(), b"").unwrap(), dataset());
        let header_only = b"sentence_id\taspect_id\topinion_from\topinion_to\topinion_polarity\n";
        assert_eq!(attach_opinions(dataset(), header_only).unwrap(), dataset());
    }

    #[test]
    fn dangling_keys_listed() {
        let err = attach_opinions(dataset(), b"s1\ta9\t0\t5\tpositive\ns7\ta1\t0\t1\tnegative\n").unwrap_err();
        match err {
            CorpusError::DanglingOpinions { keys } => assert_eq!(keys, ["s1/a9", "s7/a1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overlapping_opinions_rejected() {
        let err = attach_opinions(dataset(), b"s1\ta2\t19\t25\tpositive\ns1\ta2\t20\t23\tpositive\n").unwrap_err();
        assert!(matches!(err, CorpusError::OverlappingOpinions { .. }));
    }

    #[test]
    fn coverage_counts_follow_annotations() {
        // every other aspect annotated: exactly those gain opinions
        let sentences: Vec<Sentence> = (0..40)
            .map(|i| Sentence::new(format!("s{i}"), "good pizza").with_aspect("0", "pizza", Polarity::Positive))
            .collect();
        let ds = Dataset::with_sentences(&DatasetMeta::default(), sentences).unwrap();
        let tsv: String = (0..40).step_by(2).map(|i| format!("s{i}\t0\t0\t4\tpositive\n")).collect();
        let ds = attach_opinions(ds, tsv.as_bytes()).unwrap();
        let covered = ds.sentences.iter().flat_map(|s| &s.aspects).filter(|a| a.has_opinions()).count();
        assert_eq!(covered, 20);
    }
}
