use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::{tokenize, AspectInstance, Dataset, Polarity};
use crate::strategies::GeneratedInstance;

/// Test-set characteristics. Every measure is taken per (sentence, target
/// aspect) instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub instances: usize,
    pub words_per_sentence: f64,
    /// Distinct lowercased word tokens.
    pub vocabulary: usize,
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
    /// Absent when there are no negative labels.
    pub positive_negative_ratio: Option<f64>,
    pub aspects_per_sentence: f64,
    /// Share of instances with at least one non-target whose polarity
    /// differs from the target's.
    pub opposite_nontarget_any: f64,
    /// Share of instances with non-targets, all of them differing.
    pub opposite_nontarget_all: f64,
    pub opposite_nontargets_per_sentence: f64,
}

struct Unit<'a> {
    text: &'a str,
    aspects: &'a [AspectInstance],
    target: usize,
    label: Polarity,
}

fn compute<'a>(units: impl IntoIterator<Item = Unit<'a>>) -> DatasetStats {
    let mut n = 0usize;
    let mut words = 0usize;
    let mut vocab: HashSet<String> = HashSet::new();
    let (mut pos, mut neg, mut neu) = (0, 0, 0);
    let mut aspects = 0usize;
    let (mut any, mut all, mut opposite) = (0usize, 0usize, 0usize);
    for u in units {
        n += 1;
        for t in tokenize(u.text).iter().filter(|t| !t.is_punct()) {
            words += 1;
            vocab.insert(t.text.to_lowercase());
        }
        match u.label {
            Polarity::Positive => pos += 1,
            Polarity::Negative => neg += 1,
            Polarity::Neutral => neu += 1,
        }
        aspects += u.aspects.len();
        let target = u.aspects[u.target].polarity;
        let others = u.aspects.len() - 1;
        let differing = u
            .aspects
            .iter()
            .enumerate()
            .filter(|(i, a)| *i != u.target && a.polarity != target)
            .count();
        opposite += differing;
        any += usize::from(differing > 0);
        all += usize::from(others > 0 && differing == others);
    }
    let per = |x: usize| if n == 0 { 0.0 } else { x as f64 / n as f64 };
    DatasetStats {
        instances: n,
        words_per_sentence: per(words),
        vocabulary: vocab.len(),
        positive: pos,
        negative: neg,
        neutral: neu,
        positive_negative_ratio: (neg > 0).then(|| pos as f64 / neg as f64),
        aspects_per_sentence: per(aspects),
        opposite_nontarget_any: per(any),
        opposite_nontarget_all: per(all),
        opposite_nontargets_per_sentence: per(opposite),
    }
}

/// Statistics of an original test set; each aspect is one instance.
pub fn dataset_stats(ds: &Dataset) -> DatasetStats {
    compute(ds.sentences.iter().flat_map(|s| {
        s.aspects.iter().enumerate().map(move |(i, a)| Unit {
            text: &s.text,
            aspects: &s.aspects,
            target: i,
            label: a.polarity,
        })
    }))
}

/// Statistics of an enriched test set; labels are the gold labels.
pub fn enriched_stats(instances: &[GeneratedInstance]) -> DatasetStats {
    compute(instances.iter().filter_map(|inst| {
        let target = inst.aspects.iter().position(|a| a.aspect_id == inst.target_aspect_id)?;
        Some(Unit {
            text: &inst.text,
            aspects: &inst.aspects,
            target,
            label: inst.gold_label,
        })
    }))
}

/// Side-by-side table, one column per named statistics block.
pub fn stats_table(columns: &[(&str, &DatasetStats)]) -> String {
    let pct = |x: f64| format!("{:.0}%", 100.0 * x);
    type Cell = Box<dyn Fn(&DatasetStats) -> String>;
    let rows: Vec<(&str, Cell)> = vec![
        ("#Instances", Box::new(|s| s.instances.to_string())),
        ("#Words/Sent", Box::new(|s| format!("{:.2}", s.words_per_sentence))),
        ("Vocab Size", Box::new(|s| s.vocabulary.to_string())),
        ("Positive", Box::new(|s| s.positive.to_string())),
        ("Negative", Box::new(|s| s.negative.to_string())),
        ("Neutral", Box::new(|s| s.neutral.to_string())),
        (
            "#Positive/#Negative",
            Box::new(|s| s.positive_negative_ratio.map_or("-".into(), |r| format!("{r:.2}"))),
        ),
        ("#Aspects/Sent", Box::new(|s| format!("{:.2}", s.aspects_per_sentence))),
        ("Opp. Nontgt >= 1", Box::new(move |s| pct(s.opposite_nontarget_any))),
        ("Opp. Nontgt = All", Box::new(move |s| pct(s.opposite_nontarget_all))),
        ("#Opp. Nontgt/Sent", Box::new(|s| format!("{:.2}", s.opposite_nontargets_per_sentence))),
    ];
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let mut out = format!("{:<label_width$}", "");
    for (name, _) in columns {
        let _ = write!(out, "  {name:>10}");
    }
    out.push('\n');
    for (label, cell) in &rows {
        let _ = write!(out, "{label:<label_width$}");
        for (_, s) in columns {
            let _ = write!(out, "  {:>10}", cell(s));
        }
        out.push('\n');
    }
    out
}
