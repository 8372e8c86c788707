//! Per-bound summary rows of a suite report.

use blockdet::harness::SuiteReport;
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub bound: String,
    pub samples: usize,
    pub violations: usize,
    pub equality_hits: usize,
    pub min_margin_log: String,
    pub mean_margin_log: String,
    /// `"VIOLATION"` when the bound failed on any instance, empty otherwise.
    pub flag: String,
}

const HEADER: [&str; 7] = ["bound", "samples", "violations", "equalityHits", "minMarginLog", "meanMarginLog", "flag"];

fn number(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v.is_nan() => "nan".into(),
        Some(v) if v == f64::INFINITY => "inf".into(),
        Some(v) if v == f64::NEG_INFINITY => "-inf".into(),
        Some(v) => format!("{v:e}"),
    }
}

pub fn rows(report: &SuiteReport) -> Vec<Row> {
    report
        .bounds
        .iter()
        .map(|b| Row {
            bound: b.name.to_string(),
            samples: b.samples,
            violations: b.violations,
            equality_hits: b.equality_hits,
            min_margin_log: number(b.min_margin_log),
            mean_margin_log: number(b.mean_margin_log),
            flag: if b.violations > 0 { "VIOLATION".into() } else { String::new() },
        })
        .collect()
}

pub fn csv(rows: &[Row]) -> Result<String, Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.bound.as_str(),
            &r.samples.to_string(),
            &r.violations.to_string(),
            &r.equality_hits.to_string(),
            &r.min_margin_log,
            &r.mean_margin_log,
            &r.flag,
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn markdown(rows: &[Row]) -> String {
    let mut out = format!("| {} |\n|{}\n", HEADER.join(" | "), "---|".repeat(HEADER.len()));
    for r in rows {
        let flag = if r.flag.is_empty() { String::new() } else { format!("**{}**", r.flag) };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.bound, r.samples, r.violations, r.equality_hits, r.min_margin_log, r.mean_margin_log, flag
        ));
    }
    out
}
