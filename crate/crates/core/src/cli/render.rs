//! Report rendering in json, csv and text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::qqm::SpectrumEntry;
use crate::suite::{OutputFormat, Report, SweepRow};

#[derive(Debug)]
pub enum RenderError {
    Json(serde_json::Error),
    Csv(csv::Error),
}

impl std::fmt::Display for RenderError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenderError::Json(e) => write!(f, "{e}"),
            RenderError::Csv(e) => write!(f, "{e}"),
        }
    }
}

impl From<serde_json::Error> for RenderError {
    fn from(e: serde_json::Error) -> Self {
        RenderError::Json(e)
    }
}

impl From<csv::Error> for RenderError {
    fn from(e: csv::Error) -> Self {
        RenderError::Csv(e)
    }
}

pub fn render(report: &Report) -> Result<String, RenderError> {
    match report.config.format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        OutputFormat::Csv => match (&report.command[..], &report.spectrum) {
            ("spectrum", Some(entries)) => Ok(spectrum_csv(entries)?),
            _ => Ok(checks_csv(report)?),
        },
        OutputFormat::Text => Ok(text(report)),
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct SpectrumRow {
    label: String,
    #[serde(rename = "E_numeric")]
    numeric: f64,
    #[serde(rename = "E_closed_corrected")]
    corrected: f64,
    #[serde(rename = "E_closed_printed")]
    printed: f64,
    degeneracy_id: usize,
}

pub fn spectrum_csv(entries: &[SpectrumEntry]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if entries.is_empty() {
        w.write_record(["label", "E_numeric", "E_closed_corrected", "E_closed_printed", "degeneracy_id"])?;
    }
    for e in entries {
        w.serialize(SpectrumRow {
            label: e.label.to_string(),
            numeric: e.energy_numeric,
            corrected: e.energy_closed_form,
            printed: e.energy_printed,
            degeneracy_id: e.degeneracy_group,
        })?;
    }
    into_string(w)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "label", "E_numeric", "E_closed_corrected", "E_closed_printed"])?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.label.to_string(),
            r.energy_numeric.to_string(),
            r.energy_closed_form.to_string(),
            r.energy_printed.to_string(),
        ])?;
    }
    into_string(w)
}

fn checks_csv(report: &Report) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "id", "equation", "cutoff", "margin", "columns", "max_residual", "tolerance", "expect", "passed", "note",
    ])?;
    for c in &report.checks {
        w.write_record([
            c.id.clone(),
            c.equation.clone(),
            c.cutoff.to_string(),
            c.margin.to_string(),
            c.columns.to_string(),
            format!("{:e}", c.max_residual),
            format!("{:e}", c.tolerance),
            serde_json::to_value(c.expect).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
            c.passed.to_string(),
            c.note.clone().unwrap_or_default(),
        ])?;
    }
    into_string(w)
}

fn text(report: &Report) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "qosc {}: q={} modes={} cutoff={}", report.command, c.q, c.modes, c.cutoff);
    for check in &report.checks {
        let _ = writeln!(out, "{check}");
    }
    if let Some(entries) = &report.spectrum {
        let _ = writeln!(out, "{:<16} {:>14} {:>14} {:>14} {:>6}", "label", "E_numeric", "E_corrected", "E_printed", "group");
        for e in entries {
            let _ = writeln!(
                out,
                "{:<16} {:>14.10} {:>14.10} {:>14.10} {:>6}",
                e.label.to_string(),
                e.energy_numeric,
                e.energy_closed_form,
                e.energy_printed,
                e.degeneracy_group
            );
        }
    }
    if let Some(rows) = &report.sweep {
        let _ = writeln!(out, "sweep: {} rows", rows.len());
    }
    let s = report.summary;
    let _ = writeln!(out, "{} checks, {} passed, {} failed ({:.2} s)", s.total, s.passed, s.failed, report.wall_time_s);
    out
}
