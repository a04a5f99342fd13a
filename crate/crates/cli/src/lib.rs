//! Verification reports for the `catalan` command-line tool.
//!
//! A [`Report`] is the single JSON object the CLI emits with
//! `--format json`; CSV and text renderings carry the same rows.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use catalan_core::{GlaisherResult, QuadConfig, RepresentationResult, SeriesResult};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Row {
    Representation(RepresentationResult),
    Series(SeriesResult),
    Glaisher(GlaisherResult),
}

impl Row {
    /// Whether this row counts against `summary.failures`.
    fn fails(&self, tol: f64) -> bool {
        match self {
            Row::Representation(r) => !r.converged || !(r.abs_err_ln <= tol),
            Row::Series(s) => !(s.abs_err <= tol + s.tail_bound),
            Row::Glaisher(g) => !g.converged || !(g.abs_err <= tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub max_abs_err_ln: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub generated_at: String,
    pub config: QuadConfig,
    pub tolerance: f64,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: QuadConfig, tolerance: f64, rows: Vec<Row>) -> Self {
        let generated_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        let failures = rows.iter().filter(|r| r.fails(tolerance)).count();
        let max_abs_err_ln = rows
            .iter()
            .filter_map(|r| match r {
                Row::Representation(r) if r.converged => Some(r.abs_err_ln),
                _ => None,
            })
            .fold(0.0, f64::max);
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            generated_at,
            config,
            tolerance,
            rows,
            summary: Summary {
                max_abs_err_ln,
                failures,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.rows),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let mut last_kind = None;
        for row in &self.rows {
            let kind = std::mem::discriminant(row);
            if last_kind != Some(kind) {
                out.push_str(&text_header(row));
                out.push('\n');
                last_kind = Some(kind);
            }
            out.push_str(&text_line(row));
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: rows={} failures={} max_abs_err_ln={} tolerance={}",
            self.rows.len(),
            self.summary.failures,
            num(self.summary.max_abs_err_ln),
            num(self.tolerance)
        );
        out
    }
}

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub const REPRESENTATION_COLUMNS: [&str; 8] = [
    "n",
    "method",
    "ln_value",
    "exact_ln",
    "abs_err_ln",
    "quad_error_estimate",
    "evaluations",
    "converged",
];

pub const SERIES_COLUMNS: [&str; 7] = [
    "rule",
    "partial_sum",
    "terms_used",
    "tail_bound",
    "certified_value",
    "target",
    "abs_err",
];

pub const GLAISHER_COLUMNS: [&str; 6] = [
    "integral_value",
    "integral_error_estimate",
    "ln_a",
    "oracle_ln_a",
    "abs_err",
    "converged",
];

fn columns(row: &Row) -> &'static [&'static str] {
    match row {
        Row::Representation(_) => &REPRESENTATION_COLUMNS,
        Row::Series(_) => &SERIES_COLUMNS,
        Row::Glaisher(_) => &GLAISHER_COLUMNS,
    }
}

fn fields(row: &Row) -> Vec<String> {
    match row {
        Row::Representation(r) => vec![
            r.n.to_string(),
            r.method.as_str().to_string(),
            num(r.ln_value),
            num(r.exact_ln),
            num(r.abs_err_ln),
            num(r.quad_error_estimate),
            r.evaluations.to_string(),
            r.converged.to_string(),
        ],
        Row::Series(s) => vec![
            s.rule.as_str().to_string(),
            num(s.partial_sum),
            s.terms_used.to_string(),
            num(s.tail_bound),
            num(s.certified_value),
            num(s.target),
            num(s.abs_err),
        ],
        Row::Glaisher(g) => vec![
            num(g.integral_value),
            num(g.integral_error_estimate),
            num(g.ln_a),
            num(g.oracle_ln_a),
            num(g.abs_err),
            g.converged.to_string(),
        ],
    }
}

/// Header plus one line per row, LF endings. Rows of different kinds get
/// their own header line.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::new();
    let mut last: Option<&[&str]> = None;
    for row in rows {
        let cols = columns(row);
        if last != Some(cols) {
            out.push_str(&cols.join(","));
            out.push('\n');
            last = Some(cols);
        }
        out.push_str(&fields(row).join(","));
        out.push('\n');
    }
    out
}

fn text_header(row: &Row) -> String {
    columns(row)
        .iter()
        .map(|c| format!("{c:>24}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn text_line(row: &Row) -> String {
    fields(row)
        .iter()
        .map(|c| format!("{c:>24}"))
        .collect::<Vec<_>>()
        .join(" ")
}
