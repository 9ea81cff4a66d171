//! Rendering of command results as aligned text, CSV, or JSON.
//!
//! CSV: comma separated, header row, `.` decimal point, LF line endings.
//! Summary values that are not per-row (entropy, bounds, crossover) follow
//! the rows as `# key=value` comment lines. Big integers are written in
//! full decimal.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::spectrum::{ClassLabel, InformationRow, SpectrumReport};
use crate::verify::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected table, csv or json)")),
        }
    }
}

pub const DEFAULT_PRECISION: usize = 6;

/// Where and how to write a result.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` means standard output.
    pub destination: Option<PathBuf>,
    precision: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: Format::Table,
            destination: None,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl OutputSpec {
    pub fn new(format: Format, destination: Option<PathBuf>, precision: usize) -> Result<Self> {
        if !(1..=17).contains(&precision) {
            return Err(Error::InvalidRange(format!(
                "precision must be between 1 and 17, got {precision}"
            )));
        }
        Ok(OutputSpec {
            format,
            destination,
            precision,
        })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn fixed(&self, x: f64) -> String {
        let s = format!("{:.*}", self.precision, x);
        // never print "-0.000000"
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    fn number(&self, x: f64) -> Value {
        let rounded: f64 = self.fixed(x).parse().expect("formatted float parses");
        json!(rounded)
    }
}

/// A rectangular result with optional trailing summary values.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    footer: Vec<(&'static str, String)>,
}

impl Table {
    fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(self.header.clone(), &mut out);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(rule.iter().map(String::as_str).collect(), &mut out);
        for row in &self.rows {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        for (k, v) in &self.footer {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }

    fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        let mut out = String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8");
        for (k, v) in &self.footer {
            let _ = writeln!(out, "# {k}={v}");
        }
        out
    }
}

fn finish(table: Table, json: impl FnOnce() -> Value, spec: &OutputSpec) -> String {
    match spec.format {
        Format::Table => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json()).expect("json value");
            s.push('\n');
            s
        }
    }
}

/// `n, p(n)` rows for `1..=rows.len()`; `counts[0]` is `p(0)` and skipped.
pub fn render_partitions(counts: &[BigUint], spec: &OutputSpec) -> String {
    let rows: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, p)| vec![n.to_string(), p.to_string()])
        .collect();
    let table = Table {
        header: vec!["n", "p"],
        rows,
        footer: Vec::new(),
    };
    let json = || {
        let rows: Vec<Value> = counts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, p)| json!({ "n": n, "p": p.to_string() }))
            .collect();
        json!({ "partitions": rows })
    };
    finish(table, json, spec)
}

fn label_json(label: &ClassLabel) -> Value {
    match label {
        ClassLabel::Partitions(ps) => json!(ps),
        ClassLabel::OnCount(k) => json!(k),
    }
}

fn exact_fraction(count: &BigUint, n: usize) -> String {
    format!("{}/{}", count, BigUint::from(1u32) << n)
}

pub fn render_spectrum(report: &SpectrumReport<f64>, spec: &OutputSpec) -> String {
    let rows = report
        .classes
        .iter()
        .map(|c| {
            vec![
                c.label.to_string(),
                spec.fixed(c.intensity),
                c.count.to_string(),
                spec.fixed(c.probability),
                exact_fraction(&c.count, report.n),
            ]
        })
        .collect();
    let mut footer = vec![
        ("n", report.n.to_string()),
        ("kind", report.kind.to_string()),
        ("classes", report.classes.len().to_string()),
        ("entropy_bits", spec.fixed(report.entropy_bits)),
        ("bound_bits", spec.fixed(report.bound_bits)),
    ];
    if !report.merges.is_empty() {
        footer.push(("merges", report.merges.len().to_string()));
    }
    let table = Table {
        header: vec!["label", "intensity", "count", "probability", "probability_exact"],
        rows,
        footer,
    };
    let json = || {
        let classes: Vec<Value> = report
            .classes
            .iter()
            .map(|c| {
                json!({
                    "label": label_json(&c.label),
                    "intensity": spec.number(c.intensity),
                    "count": c.count.to_string(),
                    "probability": spec.number(c.probability),
                    "probability_exact": exact_fraction(&c.count, report.n),
                })
            })
            .collect();
        let merges: Vec<Value> = report
            .merges
            .iter()
            .map(|m| {
                json!({
                    "kept": m.kept,
                    "kept_intensity": spec.number(m.kept_intensity),
                    "merged": m.merged,
                    "merged_intensity": spec.number(m.merged_intensity),
                })
            })
            .collect();
        json!({
            "n": report.n,
            "kind": report.kind.to_string(),
            "classes": classes,
            "entropy_bits": spec.number(report.entropy_bits),
            "bound_bits": spec.number(report.bound_bits),
            "merges": merges,
        })
    };
    finish(table, json, spec)
}

pub const SERIES_COLUMNS: [&str; 6] = [
    "n",
    "h_classical",
    "h_quantum",
    "log2_n_plus_1",
    "quantum_bound",
    "ratio",
];

pub fn render_series(
    rows: &[InformationRow<f64>],
    crossover: Option<usize>,
    spec: &OutputSpec,
) -> String {
    let crossover_text = crossover.map_or_else(|| "none".to_string(), |n| n.to_string());
    let table = Table {
        header: SERIES_COLUMNS.to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    spec.fixed(r.h_classical),
                    spec.fixed(r.h_quantum),
                    spec.fixed(r.classical_bound),
                    spec.fixed(r.quantum_bound),
                    spec.fixed(r.ratio),
                ]
            })
            .collect(),
        footer: vec![("crossover_n", crossover_text)],
    };
    let json = || {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "h_classical": spec.number(r.h_classical),
                    "h_quantum": spec.number(r.h_quantum),
                    "log2_n_plus_1": spec.number(r.classical_bound),
                    "quantum_bound": spec.number(r.quantum_bound),
                    "ratio": spec.number(r.ratio),
                })
            })
            .collect();
        json!({ "series": rows, "crossover_n": crossover })
    };
    finish(table, json, spec)
}

/// One line of the survival table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoRow {
    pub n: usize,
    pub survival: f64,
    pub approximation: f64,
}

impl ZenoRow {
    /// `1 − π²/4n` is only a usable estimate when it lands in `[0, 1]`.
    pub fn approximation_in_range(&self) -> bool {
        (0.0..=1.0).contains(&self.approximation)
    }
}

pub fn render_zeno(rows: &[ZenoRow], spec: &OutputSpec) -> String {
    let table = Table {
        header: vec!["n", "survival", "approximation", "approximation_in_range"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    spec.fixed(r.survival),
                    spec.fixed(r.approximation),
                    r.approximation_in_range().to_string(),
                ]
            })
            .collect(),
        footer: Vec::new(),
    };
    let json = || {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "survival": spec.number(r.survival),
                    "approximation": spec.number(r.approximation),
                    "approximation_in_range": r.approximation_in_range(),
                })
            })
            .collect();
        json!({ "zeno": rows })
    };
    finish(table, json, spec)
}

pub fn render_checks(checks: &[Check], spec: &OutputSpec) -> String {
    let passed = checks.iter().all(|c| c.passed);
    let status = if passed { "PASS" } else { "FAIL" };
    match spec.format {
        Format::Table => {
            let mut out = String::new();
            for c in checks {
                let _ = writeln!(
                    out,
                    "{}: {} (expected {}, got {})",
                    c.name,
                    if c.passed { "ok" } else { "FAILED" },
                    c.expected,
                    c.actual
                );
            }
            let _ = writeln!(
                out,
                "overall: {status} ({}/{} checks)",
                checks.iter().filter(|c| c.passed).count(),
                checks.len()
            );
            out
        }
        _ => {
            let table = Table {
                header: vec!["check", "status", "expected", "actual"],
                rows: checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            if c.passed { "ok" } else { "failed" }.to_string(),
                            c.expected.clone(),
                            c.actual.clone(),
                        ]
                    })
                    .collect(),
                footer: vec![("overall", status.to_string())],
            };
            let json = || {
                let rows: Vec<Value> = checks
                    .iter()
                    .map(|c| {
                        json!({
                            "check": c.name,
                            "passed": c.passed,
                            "expected": c.expected,
                            "actual": c.actual,
                        })
                    })
                    .collect();
                json!({ "checks": rows, "passed": passed })
            };
            finish(table, json, spec)
        }
    }
}
