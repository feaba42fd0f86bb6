use anyhow::{bail, Context, Result};
use aspectprobe_core::analytics::{
    dataset_stats, enriched_stats, models_table, stats_table, subset_report, sweep_csv, sweep_report, EvalReport,
    PredictionSet,
};
use aspectprobe_core::corpus::Split;

use crate::args::{EvaluateArgs, StatsArgs, SweepArgs};
use crate::io::{load_corpus, load_enriched, meta, model_name, read_string, write_atomic};

fn load_predictions(path: &std::path::Path) -> Result<PredictionSet> {
    PredictionSet::from_tsv(model_name(path), &read_string(path)?).with_context(|| format!("{}", path.display()))
}

pub fn run_stats(args: &StatsArgs) -> Result<()> {
    let mut columns = Vec::new();
    if let Some(input) = &args.input {
        let ds = load_corpus(
            input,
            args.format.map(|f| f.0),
            args.opinions.as_deref(),
            &meta("unknown", Split::Test),
        )?;
        columns.push(("Ori", dataset_stats(&ds)));
    }
    if let Some(path) = &args.enriched {
        columns.push(("ARTS", enriched_stats(&load_enriched(path)?)));
    }
    if columns.is_empty() {
        bail!("stats needs --input, --enriched or both");
    }
    if args.json {
        let obj: serde_json::Map<String, serde_json::Value> = columns
            .iter()
            .map(|(n, s)| Ok((n.to_string(), serde_json::to_value(s)?)))
            .collect::<Result<_>>()?;
        println!("{}", serde_json::to_string_pretty(&obj)?);
    } else {
        let refs: Vec<(&str, &_)> = columns.iter().map(|(n, s)| (*n, s)).collect();
        print!("{}", stats_table(&refs));
    }
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> Result<Vec<EvalReport>> {
    let gold = load_enriched(&args.gold)?;
    args.predictions
        .iter()
        .map(|p| {
            let preds = load_predictions(p)?;
            subset_report(&preds, &preds, &gold).with_context(|| format!("{}", p.display()))
        })
        .collect()
}

pub fn render(reports: &[EvalReport]) -> String {
    let mut text = models_table(reports);
    for r in reports {
        text.push('\n');
        text.push_str(&r.to_text());
    }
    text
}

pub fn run_evaluate(args: &EvaluateArgs) -> Result<()> {
    let reports = evaluate(args)?;
    let text = render(&reports);
    let mut json = serde_json::to_string_pretty(&reports)?;
    json.push('\n');
    if let Some(dir) = &args.out_dir {
        write_atomic(&dir.join("report.txt"), text.as_bytes())?;
        write_atomic(&dir.join("report.json"), json.as_bytes())?;
    }
    if args.json {
        print!("{json}");
    } else {
        print!("{text}");
    }
    Ok(())
}

pub fn run_sweep(args: &SweepArgs) -> Result<()> {
    if args.gold.len() != args.predictions.len() {
        bail!(
            "sweep pairs --gold with --predictions: got {} and {}",
            args.gold.len(),
            args.predictions.len()
        );
    }
    let golds = args.gold.iter().map(|p| load_enriched(p)).collect::<Result<Vec<_>>>()?;
    let preds = args.predictions.iter().map(|p| load_predictions(p)).collect::<Result<Vec<_>>>()?;
    let runs: Vec<_> = preds.iter().zip(&golds).map(|(p, g)| (p, g.as_slice())).collect();
    let csv = sweep_csv(&sweep_report(&runs)?);
    match &args.out {
        Some(out) => write_atomic(out, csv.as_bytes()),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
