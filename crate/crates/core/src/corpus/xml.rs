//! SemEval-2014 ABSA XML.
//!
//! ```xml
//! <sentences>
//!   <sentence id="s1">
//!     <text>Tasty burgers, and crispy fries.</text>
//!     <aspectTerms>
//!       <aspectTerm term="burgers" polarity="positive" from="6" to="13"/>
//!     </aspectTerms>
//!   </sentence>
//! </sentences>
//! ```
//!
//! Aspect ids are the `id` attribute when present, else the position of the
//! term within its sentence. Opinion spans are written as `<opinion>`
//! children of `<aspectTerm>`; plain SemEval files simply have none.

use std::collections::HashSet;
use std::fmt::Write as _;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::{
    char_span_to_bytes, resolve_term_span, span_to_chars, AspectInstance, ConflictAspect, CorpusError, Dataset,
    DatasetMeta, Opinion, OffsetRepair, Parsed, RawLabel, ResolveFailures, Sentence,
};

struct RawAspect {
    id: String,
    term: String,
    label: RawLabel,
    from: usize,
    to: usize,
    opinions: Vec<(usize, usize, String)>,
}

#[derive(Default)]
struct RawSentence {
    id: String,
    text: String,
    aspects: Vec<RawAspect>,
}

fn line_col(input: &[u8], pos: usize) -> (usize, usize) {
    let upto = &input[..pos.min(input.len())];
    let line = upto.iter().filter(|&&b| b == b'\n').count() + 1;
    let col = upto.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
    (line, col)
}

fn xml_error(input: &[u8], pos: u64, message: impl Into<String>) -> CorpusError {
    let (line, column) = line_col(input, pos as usize);
    CorpusError::Xml {
        line,
        column,
        message: message.into(),
    }
}

fn attr(e: &BytesStart<'_>, name: &str, input: &[u8], pos: u64) -> Result<Option<String>, CorpusError> {
    match e.try_get_attribute(name) {
        Ok(Some(a)) => a
            .normalized_value(XmlVersion::Implicit1_0)
            .map(|v| Some(v.into_owned()))
            .map_err(|err| xml_error(input, pos, err.to_string())),
        Ok(None) => Ok(None),
        Err(err) => Err(xml_error(input, pos, err.to_string())),
    }
}

fn required(e: &BytesStart<'_>, name: &str, input: &[u8], pos: u64) -> Result<String, CorpusError> {
    attr(e, name, input, pos)?.ok_or_else(|| {
        let elem = e.name().as_ref().to_string();
        xml_error(input, pos, format!("<{elem}> is missing attribute {name:?}"))
    })
}

fn offset(e: &BytesStart<'_>, name: &str, input: &[u8], pos: u64) -> Result<usize, CorpusError> {
    let raw = required(e, name, input, pos)?;
    raw.trim()
        .parse()
        .map_err(|_| xml_error(input, pos, format!("attribute {name}={raw:?} is not an offset")))
}

fn resolve_entity(name: &str) -> Option<char> {
    match name {
        "lt" => Some('<'),
        "gt" => Some('>'),
        "amp" => Some('&'),
        "quot" => Some('"'),
        "apos" => Some('\''),
        _ => None,
    }
}

pub fn parse_semeval_xml(input: &[u8], meta: &DatasetMeta) -> Result<Parsed, CorpusError> {
    let source = std::str::from_utf8(input).map_err(|e| xml_error(input, e.valid_up_to() as u64, "invalid UTF-8"))?;
    let mut reader = Reader::from_str(source);
    let mut raw_sentences = Vec::new();
    let mut current: Option<RawSentence> = None;
    let mut in_text = false;
    let mut open_aspect: Option<RawAspect> = None;

    loop {
        let pos = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| xml_error(input, reader.error_position(), e.to_string()))?;
        let (elem, self_closing) = match &event {
            Event::Start(e) => (Some(e), false),
            Event::Empty(e) => (Some(e), true),
            _ => (None, false),
        };
        if let Some(e) = elem {
            match e.name().as_ref() {
                "sentence" => {
                    let sentence = RawSentence {
                        id: required(e, "id", input, pos)?,
                        ..Default::default()
                    };
                    if self_closing {
                        raw_sentences.push(sentence);
                    } else {
                        current = Some(sentence);
                    }
                }
                "text" => in_text = !self_closing && current.is_some(),
                "aspectTerm" => {
                    let sentence = current
                        .as_mut()
                        .ok_or_else(|| xml_error(input, pos, "<aspectTerm> outside <sentence>"))?;
                    let label = required(e, "polarity", input, pos)?
                        .parse::<RawLabel>()
                        .map_err(|err| xml_error(input, pos, err.to_string()))?;
                    let aspect = RawAspect {
                        id: attr(e, "id", input, pos)?.unwrap_or_else(|| sentence.aspects.len().to_string()),
                        term: required(e, "term", input, pos)?,
                        label,
                        from: offset(e, "from", input, pos)?,
                        to: offset(e, "to", input, pos)?,
                        opinions: Vec::new(),
                    };
                    if self_closing {
                        sentence.aspects.push(aspect);
                    } else {
                        open_aspect = Some(aspect);
                    }
                }
                "opinion" => {
                    let aspect = open_aspect
                        .as_mut()
                        .ok_or_else(|| xml_error(input, pos, "<opinion> outside <aspectTerm>"))?;
                    aspect.opinions.push((
                        offset(e, "from", input, pos)?,
                        offset(e, "to", input, pos)?,
                        required(e, "polarity", input, pos)?,
                    ));
                }
                _ => {}
            }
            continue;
        }
        match event {
            Event::End(e) => match e.name().as_ref() {
                "text" => in_text = false,
                "aspectTerm" => {
                    if let (Some(aspect), Some(sentence)) = (open_aspect.take(), current.as_mut()) {
                        sentence.aspects.push(aspect);
                    }
                }
                "sentence" => raw_sentences.extend(current.take()),
                _ => {}
            },
            Event::Text(t) if in_text => {
                if let Some(s) = current.as_mut() {
                    s.text.push_str(&t.xml10_content());
                }
            }
            Event::CData(t) if in_text => {
                if let Some(s) = current.as_mut() {
                    s.text.push_str(&t.into_inner());
                }
            }
            Event::GeneralRef(r) if in_text => {
                let ch = if r.is_char_ref() {
                    r.resolve_char_ref().map_err(|e| xml_error(input, pos, e.to_string()))?
                } else {
                    resolve_entity(&r.into_inner())
                };
                let ch = ch.ok_or_else(|| xml_error(input, pos, "unknown entity reference"))?;
                if let Some(s) = current.as_mut() {
                    s.text.push(ch);
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    build_dataset(raw_sentences, meta)
}

fn build_dataset(raw: Vec<RawSentence>, meta: &DatasetMeta) -> Result<Parsed, CorpusError> {
    let mut ds = Dataset::new(meta);
    let mut repairs = Vec::new();
    let mut failures = ResolveFailures::default();
    let mut seen = HashSet::new();

    for rs in raw {
        if !seen.insert(rs.id.clone()) {
            return Err(CorpusError::DuplicateSentence(rs.id));
        }
        let mut sentence = Sentence::new(rs.id.clone(), rs.text);
        let mut conflicts = Vec::new();
        for ra in rs.aspects {
            let Some((span, repaired)) = resolve_term_span(&sentence.text, &ra.term, ra.from, ra.to) else {
                failures.push(
                    &rs.id,
                    format!("aspect {} term {:?} at ({},{})", ra.id, ra.term, ra.from, ra.to),
                );
                continue;
            };
            if repaired {
                repairs.push(OffsetRepair {
                    sentence_id: rs.id.clone(),
                    aspect_id: ra.id.clone(),
                    term: ra.term.clone(),
                    declared: (ra.from, ra.to),
                    repaired: span,
                });
            }
            match ra.label {
                RawLabel::Conflict => conflicts.push(ConflictAspect {
                    aspect_id: ra.id,
                    term: ra.term,
                    term_span: span,
                }),
                RawLabel::Known(polarity) => {
                    let mut aspect = AspectInstance::new(ra.id, ra.term, span, polarity);
                    for (from, to, label) in ra.opinions {
                        let polarity = label.parse().map_err(|e: super::UnknownPolarity| CorpusError::Validation {
                            sentence_ids: vec![rs.id.clone()],
                            message: e.to_string(),
                        })?;
                        match char_span_to_bytes(&sentence.text, from, to) {
                            Some(span) => aspect.opinions.push(Opinion { span, polarity }),
                            None => failures.push(&rs.id, format!("opinion ({from},{to}) out of bounds")),
                        }
                    }
                    sentence.aspects.push(aspect);
                }
            }
        }
        if !conflicts.is_empty() {
            ds.conflicts.insert(rs.id.clone(), conflicts);
        }
        ds.sentences.push(sentence);
    }
    failures.into_result()?;
    ds.validate()?;
    Ok(Parsed { dataset: ds, repairs })
}

pub fn write_semeval_xml(ds: &Dataset) -> Vec<u8> {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<sentences>\n");
    for sentence in &ds.sentences {
        let text = &sentence.text;
        let _ = writeln!(out, "    <sentence id=\"{}\">", escape(sentence.sentence_id.as_str()));
        let _ = writeln!(out, "        <text>{}</text>", escape(text.as_str()));
        let conflicts = ds.conflicts.get(&sentence.sentence_id).map_or(&[][..], Vec::as_slice);
        if !sentence.aspects.is_empty() || !conflicts.is_empty() {
            out.push_str("        <aspectTerms>\n");
            for aspect in &sentence.aspects {
                let (from, to) = span_to_chars(text, aspect.term_span);
                let _ = write!(
                    out,
                    "            <aspectTerm id=\"{}\" term=\"{}\" polarity=\"{}\" from=\"{from}\" to=\"{to}\"",
                    escape(aspect.aspect_id.as_str()),
                    escape(aspect.term.as_str()),
                    aspect.polarity,
                );
                if aspect.opinions.is_empty() {
                    out.push_str("/>\n");
                } else {
                    out.push_str(">\n");
                    for op in &aspect.opinions {
                        let (from, to) = span_to_chars(text, op.span);
                        let _ = writeln!(
                            out,
                            "                <opinion from=\"{from}\" to=\"{to}\" polarity=\"{}\"/>",
                            op.polarity
                        );
                    }
                    out.push_str("            </aspectTerm>\n");
                }
            }
            for c in conflicts {
                let (from, to) = span_to_chars(text, c.term_span);
                let _ = writeln!(
                    out,
                    "            <aspectTerm id=\"{}\" term=\"{}\" polarity=\"conflict\" from=\"{from}\" to=\"{to}\"/>",
                    escape(c.aspect_id.as_str()),
                    escape(c.term.as_str()),
                );
            }
            out.push_str("        </aspectTerms>\n");
        }
        out.push_str("    </sentence>\n");
    }
    out.push_str("</sentences>\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Polarity, Span};

    const TABLE_ONE: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<sentences>
    <sentence id="s1">
        <text>Tasty burgers, and crispy fries.</text>
        <aspectTerms>
            <aspectTerm term="burgers" polarity="positive" from="6" to="13"/>
        </aspectTerms>
    </sentence>
</sentences>
"#;

    fn parse(xml: &str) -> Result<Parsed, CorpusError> {
        parse_semeval_xml(xml.as_bytes(), &DatasetMeta::default())
    }

    #[test]
    fn table_one_sentence() {
        let parsed = parse(TABLE_ONE).unwrap();
        let ds = parsed.dataset;
        assert_eq!(ds.sentences.len(), 1);
        let s = &ds.sentences[0];
        assert_eq!(s.text, "Tasty burgers, and crispy fries.");
        assert_eq!(s.aspects.len(), 1);
        assert_eq!(s.aspects[0].term_span, Span::new(6, 13));
        assert_eq!(s.aspects[0].aspect_id, "0");
        assert_eq!(s.aspects[0].polarity, Polarity::Positive);
        assert!(parsed.repairs.is_empty());
    }

    #[test]
    fn empty_sentence_list() {
        let ds = parse("<sentences></sentences>").unwrap().dataset;
        assert!(ds.sentences.is_empty());
        let ds = parse("<sentences/>").unwrap().dataset;
        assert!(ds.sentences.is_empty());
    }

    #[test]
    fn offsets_rederived_when_unique() {
        let xml = TABLE_ONE.replace("from=\"6\" to=\"13\"", "from=\"7\" to=\"14\"");
        let parsed = parse(&xml).unwrap();
        assert_eq!(parsed.dataset.sentences[0].aspects[0].term_span, Span::new(6, 13));
        assert_eq!(parsed.repairs.len(), 1);
        assert_eq!(parsed.repairs[0].declared, (7, 14));
    }

    #[test]
    fn ambiguous_offsets_fail_with_sentence_id() {
        let xml = r#"<sentences><sentence id="x9"><text>fries and fries</text><aspectTerms>
            <aspectTerm term="fries" polarity="neutral" from="1" to="6"/></aspectTerms></sentence></sentences>"#;
        match parse(xml) {
            Err(CorpusError::Validation { sentence_ids, .. }) => assert_eq!(sentence_ids, ["x9"]),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_reports_position() {
        let xml = "<sentences>\n  <sentence id=\"1\">\n    <text>hi</txt>\n</sentences>";
        match parse(xml) {
            Err(CorpusError::Xml { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected xml error, got {other:?}"),
        }
    }

    #[test]
    fn conflict_goes_to_side_channel() {
        let xml = r#"<sentences><sentence id="1"><text>Good pizza, odd pasta.</text><aspectTerms>
            <aspectTerm term="pizza" polarity="positive" from="5" to="10"/>
            <aspectTerm term="pasta" polarity="conflict" from="16" to="21"/>
            </aspectTerms></sentence></sentences>"#;
        let ds = parse(xml).unwrap().dataset;
        assert_eq!(ds.sentences[0].aspects.len(), 1);
        assert_eq!(ds.conflicts["1"][0].aspect_id, "1");
    }

    #[test]
    fn entities_and_non_ascii_offsets() {
        let xml = r#"<sentences><sentence id="1"><text>The caf&#233; &amp; "bistro" crêpes rock</text><aspectTerms>
            <aspectTerm term="crêpes" polarity="positive" from="24" to="30"/>
            </aspectTerms></sentence></sentences>"#;
        let ds = parse(xml).unwrap().dataset;
        let s = &ds.sentences[0];
        assert_eq!(s.text, "The café & \"bistro\" crêpes rock");
        assert_eq!(s.aspects[0].term_span.slice(&s.text), "crêpes");
        let again = parse(std::str::from_utf8(&write_semeval_xml(&ds)).unwrap()).unwrap().dataset;
        assert_eq!(again, ds);
    }

    #[test]
    fn round_trip_with_opinions_and_conflicts() {
        let xml = r#"<sentences><sentence id="1"><text>Good pizza, odd pasta.</text><aspectTerms>
            <aspectTerm term="pizza" polarity="positive" from="5" to="10"><opinion from="0" to="4" polarity="positive"/></aspectTerm>
            <aspectTerm term="pasta" polarity="conflict" from="16" to="21"/>
            </aspectTerms></sentence><sentence id="2"><text>No aspects.</text></sentence></sentences>"#;
        let ds = parse(xml).unwrap().dataset;
        assert_eq!(ds.sentences[0].aspects[0].opinions.len(), 1);
        let again = parse(std::str::from_utf8(&write_semeval_xml(&ds)).unwrap()).unwrap().dataset;
        assert_eq!(again, ds);
    }
}
