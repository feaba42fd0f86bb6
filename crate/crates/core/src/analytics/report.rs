use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{mean, robustness_units, welch_t, AnalyticsError, CoverageError, PredictionSet, RobustnessUnit};
use crate::strategies::{GeneratedInstance, StrategyTag};

/// Significance level for the change marks.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetRow {
    /// `entire` or a strategy name.
    pub subset: String,
    pub sources: usize,
    pub variations: usize,
    pub original: f64,
    pub new: f64,
    pub change: f64,
    /// (new − original) / original; absent when original is 0.
    pub relative_change: Option<f64>,
    /// Welch p-value; absent when the test is undefined for the samples.
    pub p_value: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KAccuracy {
    pub k: usize,
    pub n: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub model: String,
    pub instances: usize,
    pub units: usize,
    pub ars: f64,
    pub rows: Vec<SubsetRow>,
    /// AddDiff accuracy by number of appended expressions.
    pub per_k: Vec<KAccuracy>,
}

fn row(subset: &str, source_bits: &[bool], new_bits: &[bool]) -> Option<SubsetRow> {
    let original = mean(source_bits)?;
    let new = mean(new_bits)?;
    let as_f = |b: &[bool]| b.iter().map(|x| if *x { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    // two constant samples with different means: the t statistic is
    // unbounded, so the change counts as significant
    let p_value = match welch_t(&as_f(source_bits), &as_f(new_bits)) {
        Ok(w) => Some(w.p),
        Err(_) if source_bits.len() >= 2 && new_bits.len() >= 2 => Some(0.0),
        Err(_) => None,
    };
    Some(SubsetRow {
        subset: subset.to_string(),
        sources: source_bits.len(),
        variations: new_bits.len(),
        original,
        new,
        change: new - original,
        relative_change: (original > 0.0).then(|| (new - original) / original),
        p_value,
        significant: p_value.is_some_and(|p| p <= ALPHA),
    })
}

/// Table of original vs. perturbed accuracy per subset.
///
/// Sources are scored with `original` and generated instances with `new`;
/// both may be the same prediction set. The entire-set row reports ARS as
/// its new value.
pub fn subset_report(
    original: &PredictionSet,
    new: &PredictionSet,
    instances: &[GeneratedInstance],
) -> Result<EvalReport, AnalyticsError> {
    let units = robustness_units(instances)?;
    if units.is_empty() {
        return Err(AnalyticsError::Domain("no instances to evaluate".into()));
    }
    let mut missing = Vec::new();
    for u in &units {
        if original.get(&u.source_id).is_none() {
            missing.push(u.source_id.as_str());
        }
        missing.extend(
            u.variations
                .values()
                .flatten()
                .map(|(id, _)| id.as_str())
                .filter(|id| new.get(id).is_none()),
        );
    }
    if !missing.is_empty() {
        return Err(CoverageError {
            count: missing.len(),
            first: missing.iter().take(5).map(|s| s.to_string()).collect(),
        }
        .into());
    }
    let source_bits = original.correctness(units.iter().map(|u| (u.source_id.as_str(), u.source_label)))?;
    let right = |id: &str, label| new.get(id) == Some(label);
    let unit_bits: Vec<bool> = units
        .iter()
        .zip(&source_bits)
        .map(|(u, s)| *s && u.variations.values().flatten().all(|(id, label)| right(id, *label)))
        .collect();

    let mut rows = vec![row("entire", &source_bits, &unit_bits).expect("non-empty units")];
    for strategy in StrategyTag::ALL.into_iter().filter(|s| *s != StrategyTag::Source) {
        let with: Vec<(usize, &RobustnessUnit)> = units.iter().enumerate().filter(|(_, u)| u.has(strategy)).collect();
        let src: Vec<bool> = with.iter().map(|(i, _)| source_bits[*i]).collect();
        let vars: Vec<bool> = with
            .iter()
            .flat_map(|(_, u)| &u.variations[&strategy])
            .map(|(id, label)| right(id, *label))
            .collect();
        if let Some(r) = row(strategy.as_str(), &src, &vars) {
            rows.push(r);
        }
    }

    let mut by_k: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    for inst in instances.iter().filter(|i| i.strategy == StrategyTag::AddDiff) {
        if let Some(k) = inst.k {
            by_k.entry(k).or_default().push(right(&inst.new_id, inst.gold_label));
        }
    }
    let per_k = by_k
        .into_iter()
        .map(|(k, bits)| KAccuracy {
            k,
            n: bits.len(),
            accuracy: mean(&bits).unwrap_or(0.0),
        })
        .collect();

    Ok(EvalReport {
        model: new.model_name.clone(),
        instances: instances.len(),
        units: units.len(),
        ars: rows[0].new,
        rows,
        per_k,
    })
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn change_cell(r: &SubsetRow) -> String {
    format!("{} -> {} ({:+.2}){}", pct(r.original), pct(r.new), 100.0 * r.change, if r.significant { "*" } else { "" })
}

impl EvalReport {
    pub fn row(&self, subset: &str) -> Option<&SubsetRow> {
        self.rows.iter().find(|r| r.subset == subset)
    }

    /// Aligned text table; accuracies in percent, `*` marks p ≤ 0.05.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "model: {}  instances: {}  units: {}  ARS: {}",
            self.model,
            self.instances,
            self.units,
            pct(self.ars)
        );
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>10} {:>8} {:>8} {:>9} {:>10} {:>10}",
            "subset", "sources", "variations", "ori", "new", "change", "rel.change", "p"
        );
        for r in &self.rows {
            let rel = r.relative_change.map_or("-".to_string(), |x| format!("{:+.2}%", 100.0 * x));
            let p = r.p_value.map_or("-".to_string(), |p| format!("{p:.4}"));
            let change = format!("{:+.2}{}", 100.0 * r.change, if r.significant { "*" } else { "" });
            let _ = writeln!(
                out,
                "{:<16} {:>8} {:>10} {:>8} {:>8} {:>9} {:>10} {:>10}",
                r.subset,
                r.sources,
                r.variations,
                pct(r.original),
                pct(r.new),
                change,
                rel,
                p
            );
        }
        if !self.per_k.is_empty() {
            let _ = writeln!(out, "adddiff by k:");
            for k in &self.per_k {
                let _ = writeln!(out, "  k={:<3} n={:<6} {}", k.k, k.n, pct(k.accuracy));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One row per model, sorted by entire-set new accuracy (ARS), best first.
pub fn models_table(reports: &[EvalReport]) -> String {
    let mut sorted: Vec<&EvalReport> = reports.iter().collect();
    sorted.sort_by(|a, b| b.ars.total_cmp(&a.ars).then_with(|| a.model.cmp(&b.model)));
    let mut subsets: Vec<&str> = Vec::new();
    for r in &sorted {
        for row in &r.rows {
            if !subsets.contains(&row.subset.as_str()) {
                subsets.push(&row.subset);
            }
        }
    }
    let width = sorted.iter().map(|r| r.model.len()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<width$}", "model");
    for s in &subsets {
        let _ = write!(out, "  {s:<28}");
    }
    out = out.trim_end().to_string();
    out.push('\n');
    for r in sorted {
        let mut line = format!("{:<width$}", r.model);
        for s in &subsets {
            let cell = r.row(s).map_or("-".to_string(), change_cell);
            let _ = write!(line, "  {cell:<28}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
