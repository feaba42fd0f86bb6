//! Review sheets: `new_id, text, target_polarity, fluency, sentiment,
//! fixed_text`, tab separated with a header row.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use aspectprobe_core::corpus::{occurrences, Span};
use aspectprobe_core::strategies::{write_enriched, GeneratedInstance};
use serde::Serialize;

use crate::args::{ReviewExportArgs, ReviewImportArgs};
use crate::io::{load_enriched, read, write_atomic};

pub const HEADER: [&str; 6] = ["new_id", "text", "target_polarity", "fluency", "sentiment", "fixed_text"];
pub const FINAL: &str = "final.jsonl";
pub const SUMMARY: &str = "review_summary.txt";
pub const SUMMARY_JSON: &str = "review_summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "accept" => Ok(Verdict::Accept),
            "reject" => Ok(Verdict::Reject),
            other => Err(format!("verdict must be accept or reject, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewRecord {
    pub new_id: String,
    pub text: String,
    pub target_polarity: String,
    pub fluency: Verdict,
    pub sentiment: Verdict,
    pub fixed_text: Option<String>,
}

impl ReviewRecord {
    pub fn accepted(&self) -> bool {
        self.fluency == Verdict::Accept && self.sentiment == Verdict::Accept
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().delimiter(b'\t').from_writer(Vec::new())
}

/// Sheet with empty verdict columns.
pub fn export(instances: &[GeneratedInstance]) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(HEADER)?;
    for inst in instances {
        w.write_record([&inst.new_id, &inst.text, inst.gold_label.as_str(), "", "", ""])?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

/// Parse a filled sheet. Every row needs both verdicts; a fixed text is
/// only allowed on rejected rows.
pub fn parse_review(input: &[u8]) -> Result<Vec<ReviewRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(true)
        .from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        bail!("review header must be {}", HEADER.join("\\t"));
    }
    let mut out = Vec::new();
    for (idx, row) in r.records().enumerate() {
        let line = idx + 2;
        let row = row.with_context(|| format!("review line {line}"))?;
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        let verdict = |i: usize| -> Result<Verdict> {
            let v = field(i);
            if v.trim().is_empty() {
                bail!("review line {line}: missing {} verdict for {}", HEADER[i], field(0));
            }
            v.parse().map_err(|e: String| anyhow!("review line {line}: {e}"))
        };
        let fixed = Some(field(5)).filter(|s| !s.is_empty());
        let rec = ReviewRecord {
            new_id: field(0),
            text: field(1),
            target_polarity: field(2),
            fluency: verdict(3)?,
            sentiment: verdict(4)?,
            fixed_text: fixed,
        };
        if rec.fixed_text.is_some() && rec.accepted() {
            bail!("review line {line}: fixed_text on an accepted row ({})", rec.new_id);
        }
        out.push(rec);
    }
    Ok(out)
}

fn nearest(found: &[usize], old: usize) -> Option<usize> {
    found.iter().copied().min_by_key(|&p| (p.abs_diff(old), p))
}

/// Replace the text and re-derive spans by search. Aspect terms must still
/// occur; an opinion whose words vanished is dropped.
pub fn apply_fix(inst: &GeneratedInstance, fixed: &str) -> Result<GeneratedInstance, String> {
    let mut out = inst.clone();
    out.text = fixed.to_string();
    for a in &mut out.aspects {
        let found = occurrences(fixed, &a.term);
        let start = nearest(&found, a.term_span.start).ok_or_else(|| format!("aspect term {:?} no longer occurs", a.term))?;
        a.term_span = Span::new(start, start + a.term.len());
        let old = &inst.text;
        a.opinions.retain_mut(|op| {
            let words = op.span.slice(old);
            match nearest(&occurrences(fixed, words), op.span.start) {
                Some(s) => {
                    op.span = Span::new(s, s + words.len());
                    true
                }
                None => false,
            }
        });
    }
    out.to_sentence().validate().map_err(|e| e.to_string())?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub accepted: usize,
    pub total: usize,
}

impl Rate {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.accepted as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agreement {
    pub raw: f64,
    pub cohen_kappa: f64,
}

/// Raw agreement and Cohen's kappa of two verdict sequences. Kappa is 1
/// when chance agreement is already certain and the raters agree.
pub fn agreement(a: &[Verdict], b: &[Verdict]) -> Agreement {
    let n = a.len().min(b.len()) as f64;
    if n == 0.0 {
        return Agreement { raw: 0.0, cohen_kappa: 0.0 };
    }
    let same = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let acc = |v: &[Verdict]| v.iter().filter(|x| **x == Verdict::Accept).count() as f64 / n;
    let (pa, pb) = (acc(a), acc(b));
    let po = same / n;
    let pe = pa * pb + (1.0 - pa) * (1.0 - pb);
    let kappa = if (1.0 - pe).abs() < 1e-12 {
        if po == 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (po - pe) / (1.0 - pe)
    };
    Agreement {
        raw: po,
        cohen_kappa: kappa,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReviewSummary {
    pub total: usize,
    pub fluency: Rate,
    pub sentiment: Rate,
    pub fixed: usize,
    pub dropped: usize,
    pub final_instances: usize,
    pub agreement: Option<BTreeMap<&'static str, Agreement>>,
}

impl ReviewSummary {
    pub fn to_text(&self) -> String {
        let mut out = String::from("Acceptance Rate\n");
        for (name, r) in [("fluency", self.fluency), ("sentiment", self.sentiment)] {
            let _ = writeln!(out, "  {name:<10} {:>6}/{:<6} {:.2}%", r.accepted, r.total, 100.0 * r.fraction());
        }
        let _ = writeln!(
            out,
            "fixed {}  dropped {}  final {}",
            self.fixed, self.dropped, self.final_instances
        );
        if let Some(agr) = &self.agreement {
            out.push_str("Inter-Agreement\n");
            for (name, a) in agr {
                let _ = writeln!(out, "  {name:<10} raw {:.2}%  cohen_kappa {:.4}", 100.0 * a.raw, a.cohen_kappa);
            }
        }
        out
    }
}

/// Apply `review` to `instances`: rejected rows with a fix get the fixed
/// text, rejected rows without one are dropped.
pub fn import(
    instances: &[GeneratedInstance],
    review: &[ReviewRecord],
    second: Option<&[ReviewRecord]>,
) -> Result<(Vec<GeneratedInstance>, ReviewSummary)> {
    let by_id = index(review)?;
    let missing: Vec<&str> = instances
        .iter()
        .filter(|i| !by_id.contains_key(i.new_id.as_str()))
        .map(|i| i.new_id.as_str())
        .collect();
    if !missing.is_empty() {
        bail!(
            "{} rows have no verdicts (first: {})",
            missing.len(),
            missing.iter().take(5).copied().collect::<Vec<_>>().join(", ")
        );
    }
    let known: HashMap<&str, ()> = instances.iter().map(|i| (i.new_id.as_str(), ())).collect();
    if let Some(extra) = review.iter().find(|r| !known.contains_key(r.new_id.as_str())) {
        bail!("review row {} is not in the enriched set", extra.new_id);
    }

    let mut out = Vec::new();
    let mut errors = Vec::new();
    let (mut fixed, mut dropped) = (0, 0);
    let mut fluency = Rate { accepted: 0, total: 0 };
    let mut sentiment = Rate { accepted: 0, total: 0 };
    for inst in instances {
        let rec = by_id[inst.new_id.as_str()];
        fluency.total += 1;
        sentiment.total += 1;
        fluency.accepted += usize::from(rec.fluency == Verdict::Accept);
        sentiment.accepted += usize::from(rec.sentiment == Verdict::Accept);
        match (&rec.fixed_text, rec.accepted()) {
            (_, true) => out.push(inst.clone()),
            (Some(text), false) => match apply_fix(inst, text) {
                Ok(f) => {
                    fixed += 1;
                    out.push(f);
                }
                Err(e) => errors.push(format!("{}: {e}", inst.new_id)),
            },
            (None, false) => dropped += 1,
        }
    }
    if !errors.is_empty() {
        bail!("{} rows failed: {}", errors.len(), errors.join("; "));
    }

    let agreement = match second {
        None => None,
        Some(other) => {
            let other = index(other)?;
            let mut pairs: Vec<(&ReviewRecord, &ReviewRecord)> = Vec::new();
            for inst in instances {
                let b = other
                    .get(inst.new_id.as_str())
                    .ok_or_else(|| anyhow!("second review lacks row {}", inst.new_id))?;
                pairs.push((by_id[inst.new_id.as_str()], b));
            }
            let col = |f: fn(&ReviewRecord) -> Verdict| -> (Vec<Verdict>, Vec<Verdict>) {
                pairs.iter().map(|(a, b)| (f(a), f(b))).unzip()
            };
            let (fa, fb) = col(|r| r.fluency);
            let (sa, sb) = col(|r| r.sentiment);
            Some(BTreeMap::from([
                ("fluency", agreement(&fa, &fb)),
                ("sentiment", agreement(&sa, &sb)),
            ]))
        }
    };
    let summary = ReviewSummary {
        total: instances.len(),
        fluency,
        sentiment,
        fixed,
        dropped,
        final_instances: out.len(),
        agreement,
    };
    Ok((out, summary))
}

fn index(review: &[ReviewRecord]) -> Result<HashMap<&str, &ReviewRecord>> {
    let mut by_id = HashMap::new();
    for r in review {
        if by_id.insert(r.new_id.as_str(), r).is_some() {
            bail!("review lists {} twice", r.new_id);
        }
    }
    Ok(by_id)
}

pub fn run_export(args: &ReviewExportArgs) -> Result<()> {
    let instances = load_enriched(&args.gold)?;
    write_atomic(&args.out, &export(&instances)?)
}

pub fn run_import(args: &ReviewImportArgs) -> Result<()> {
    let instances = load_enriched(&args.gold)?;
    let review = parse_review(&read(&args.review)?).with_context(|| format!("{}", args.review.display()))?;
    let second = args
        .second_review
        .as_deref()
        .map(|p| parse_review(&read(p)?).with_context(|| format!("{}", p.display())))
        .transpose()?;
    let (out, summary) = import(&instances, &review, second.as_deref())?;
    write_atomic(&args.out_dir.join(FINAL), &write_enriched(&out))?;
    let text = summary.to_text();
    write_atomic(&args.out_dir.join(SUMMARY), text.as_bytes())?;
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write_atomic(&args.out_dir.join(SUMMARY_JSON), json.as_bytes())?;
    print!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_by_hand() {
        use Verdict::{Accept as A, Reject as R};
        // po = 0.7; pa = 0.6, pb = 0.5; pe = 0.3 + 0.2 = 0.5; kappa = 0.4
        let a = [A, A, A, A, A, A, R, R, R, R];
        let b = [A, A, A, A, R, R, A, R, R, R];
        let g = agreement(&a, &b);
        assert!((g.raw - 0.7).abs() < 1e-12);
        assert!((g.cohen_kappa - 0.4).abs() < 1e-12);
        let all = [A, A, A];
        assert_eq!(agreement(&all, &all), Agreement { raw: 1.0, cohen_kappa: 1.0 });
    }

    #[test]
    fn verdicts_required() {
        let sheet = "new_id\ttext\ttarget_polarity\tfluency\tsentiment\tfixed_text\nx\tt\tpositive\taccept\t\t\n";
        let err = parse_review(sheet.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("missing sentiment verdict for x"), "{err}");
        let sheet = "new_id\ttext\ttarget_polarity\tfluency\tsentiment\tfixed_text\nx\tt\tpositive\taccept\taccept\tnew\n";
        assert!(parse_review(sheet.as_bytes()).is_err());
    }
}
