//! Text, JSON and CSV rendering of an [`Outcome`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::Format;
use crate::run::Outcome;

pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Text => text(outcome),
        Format::Json => json_report(outcome),
        Format::Csv => csv_report(outcome),
    }
}

fn text(outcome: &Outcome) -> String {
    let mut out = String::new();
    for info in &outcome.info {
        let _ = writeln!(out, "{}: {}", info.key, info.text);
    }
    for report in &outcome.reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        let count = report.witnesses.len();
        let plural = if count == 1 { "" } else { "es" };
        let mut line = format!("[{status}] {} ({count} witness{plural}", report.name);
        if let Some(e) = report.max_error {
            let _ = write!(line, ", max error {e:.3e}");
        }
        line.push(')');
        let _ = writeln!(out, "{line}");
        for w in report.failures() {
            let _ = writeln!(
                out,
                "  witness: {}: expected {}, got {}",
                w.description, w.expected, w.actual
            );
        }
        for note in &report.notes {
            let _ = writeln!(out, "  note: {note}");
        }
    }
    if !outcome.reports.is_empty() {
        let failed = outcome.reports.iter().filter(|r| !r.passed).count();
        if failed == 0 {
            let _ = writeln!(out, "all {} checks passed", outcome.reports.len());
        } else {
            let _ = writeln!(out, "{failed} of {} checks failed", outcome.reports.len());
        }
    }
    out
}

fn json_report(outcome: &Outcome) -> String {
    let info: BTreeMap<&str, &Value> = outcome.info.iter().map(|i| (i.key.as_str(), &i.json)).collect();
    let value = json!({
        "command": outcome.command,
        "info": info,
        "reports": outcome.reports,
        "passed": outcome.passed(),
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn csv_report(outcome: &Outcome) -> String {
    if let Some(table) = &outcome.polytope_csv {
        return table.clone();
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    if outcome.reports.is_empty() {
        writer.write_record(["key", "value"]).expect("in-memory write");
        for info in &outcome.info {
            writer.write_record([&info.key, &info.text]).expect("in-memory write");
        }
    } else {
        writer
            .write_record(["report", "description", "expected", "actual", "ok"])
            .expect("in-memory write");
        for report in &outcome.reports {
            for w in &report.witnesses {
                let ok = if w.ok { "true" } else { "false" };
                writer
                    .write_record([&report.name, &w.description, &w.expected, &w.actual, ok])
                    .expect("in-memory write");
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8 input")
}
