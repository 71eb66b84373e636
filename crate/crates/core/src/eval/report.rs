//! Report and outcome-log files.
//!
//! The text report is tab-separated, one row per split and a final `pooled`
//! row, percentages to two decimals and `-` for absent values. The matrix
//! report carries the same numbers as ratios in the feature-matrix layout,
//! absent values as NaN.

use std::io::{Read, Write};

use super::{EvalError, EvalReport, Metrics, Outcome};
use crate::features::matrix::{write_matrix, MatrixRow};

pub const REPORT_COLUMNS: [&str; 8] = ["tp", "fp", "tn", "fn", "precision", "recall", "accuracy", "cpr"];

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |r| format!("{:.2}", 100.0 * r))
}

fn io(e: impl std::fmt::Display) -> EvalError {
    EvalError::Report(e.to_string())
}

pub fn write_report_text<W: Write>(mut out: W, report: &EvalReport) -> Result<(), EvalError> {
    writeln!(out, "# grouping_key\t{}", report.grouping_key).map_err(io)?;
    writeln!(out, "split\t{}", REPORT_COLUMNS.join("\t")).map_err(io)?;
    let rows = report.splits.iter().map(|s| (s.name.as_str(), s.confusion, s.metrics));
    for (name, c, m) in rows.chain([("pooled", report.aggregate, report.aggregate_metrics)]) {
        writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.tp,
            c.fp,
            c.tn,
            c.fn_,
            pct(m.precision),
            pct(m.recall),
            pct(m.accuracy),
            pct(m.cpr)
        )
        .map_err(io)?;
    }
    Ok(())
}

fn metric_values(c: &super::Confusion, m: &Metrics) -> Vec<f64> {
    let mut v = vec![c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64];
    v.extend([m.precision, m.recall, m.accuracy, m.cpr].map(|x| x.unwrap_or(f64::NAN)));
    v
}

/// One matrix row per split plus `pooled`; the project field holds the
/// grouping key.
pub fn write_report_matrix<W: Write>(out: W, report: &EvalReport) -> Result<(), EvalError> {
    let key = report.grouping_key.to_string();
    let row = |name: &str, values| MatrixRow { patch_id: name.to_string(), project: key.clone(), tool: String::new(), label: None, values };
    let mut rows: Vec<MatrixRow> =
        report.splits.iter().map(|s| row(&s.name, metric_values(&s.confusion, &s.metrics))).collect();
    rows.push(row("pooled", metric_values(&report.aggregate, &report.aggregate_metrics)));
    let columns: Vec<String> = REPORT_COLUMNS.iter().map(|c| c.to_string()).collect();
    write_matrix(out, &columns, &rows).map_err(io)
}

/// CSV with header `patch_id,truth,proba,pred`.
pub fn write_outcomes<'a, W: Write>(out: W, outcomes: impl IntoIterator<Item = &'a Outcome>) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    for o in outcomes {
        w.serialize(o).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_outcomes<R: Read>(input: R) -> Result<Vec<Outcome>, EvalError> {
    csv::Reader::from_reader(input).deserialize().collect::<Result<_, _>>().map_err(io)
}
