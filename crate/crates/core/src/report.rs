//! Rendering of ranking results as plain tables, CSV or JSON.
//!
//! Output is a pure function of the result and the options, byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::scale::LinguisticScale;
use crate::tfn::Tfn;
use crate::topsis::{round_to, RankingResult};

pub const MAX_PRECISION: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected table, csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub format: Format,
    /// Decimals shown, at most [`MAX_PRECISION`].
    pub precision: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: Format::Table,
            precision: 3,
        }
    }
}

/// A remark printed under a report, e.g. about one category.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub subject: String,
    pub text: String,
}

pub fn render_ranking(
    result: &RankingResult,
    options: &RenderOptions,
    label: &str,
    notes: &[Note],
) -> String {
    let p = options.precision.min(MAX_PRECISION);
    match options.format {
        Format::Table => render_table(result, p, label, notes),
        Format::Csv => render_csv(result, p, label),
        Format::Json => render_json(result, p, notes),
    }
}

fn fmt_num(x: f64, p: u32) -> String {
    format!("{:.*}", p as usize, x)
}

fn fmt_tfn(t: &Tfn, p: u32) -> String {
    format!("{:.*}", p as usize, t)
}

/// The fuzzy average column is only meaningful with one criterion.
fn fuzzy_average(result: &RankingResult, alternative: &str) -> Option<Tfn> {
    if result.raw.criteria().len() != 1 {
        return None;
    }
    result.raw.position(alternative).map(|i| result.raw.cell(i, 0))
}

fn render_table(result: &RankingResult, p: u32, label: &str, notes: &[Note]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ideal strategy: {}", result.ideals.strategy);
    let _ = writeln!(out, "normalization: {}", result.normalization);
    let criteria = result.raw.criteria();
    for (name, ideals) in [
        ("positive ideal", &result.ideals.positive),
        ("negative ideal", &result.ideals.negative),
    ] {
        if criteria.len() == 1 {
            let _ = writeln!(out, "{name}: {}", fmt_tfn(&ideals[0], p));
        } else {
            for (crit, t) in criteria.iter().zip(ideals.iter()) {
                let _ = writeln!(out, "{name} [{}]: {}", crit.id, fmt_tfn(t, p));
            }
        }
    }
    if let Some(d) = result.tie_policy.rounded_to {
        let _ = writeln!(out, "ranked on closeness rounded to {d} decimals");
    }
    if result.tie_policy.tie_epsilon > 0.0 {
        let _ = writeln!(out, "tie epsilon: {}", result.tie_policy.tie_epsilon);
    }
    out.push('\n');

    let with_average = criteria.len() == 1;
    let mut header = vec![label.to_string()];
    if with_average {
        header.push("fuzzy average".into());
    }
    header.extend(["d+", "d-", "cc", "rank"].map(String::from));
    let mut table = vec![header];
    for row in &result.rows {
        let mut cells = vec![row.alternative.clone()];
        if let Some(t) = fuzzy_average(result, &row.alternative) {
            cells.push(fmt_tfn(&t, p));
        }
        cells.push(fmt_num(row.s_plus, p));
        cells.push(fmt_num(row.s_minus, p));
        cells.push(fmt_num(row.cc, p));
        cells.push(row.rank.to_string());
        table.push(cells);
    }
    let columns = table[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in &table {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            // text columns left-aligned, numbers right-aligned
            if c == 0 || (with_average && c == 1) {
                line.push_str(cell);
                line.extend(std::iter::repeat_n(' ', pad));
            } else {
                line.extend(std::iter::repeat_n(' ', pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    if !notes.is_empty() {
        out.push('\n');
        for note in notes {
            let _ = writeln!(out, "note [{}]: {}", note.subject, note.text);
        }
    }
    out
}

fn render_csv(result: &RankingResult, p: u32, label: &str) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([label, "s_plus", "s_minus", "cc", "rank"])
        .expect("in-memory write");
    for row in &result.rows {
        w.write_record([
            row.alternative.clone(),
            fmt_num(row.s_plus, p),
            fmt_num(row.s_minus, p),
            fmt_num(row.cc, p),
            row.rank.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    ideal_strategy: String,
    normalization: String,
    precision: u32,
    tie_epsilon: f64,
    rounded_to: Option<u32>,
    ideals: JsonIdeals,
    rows: Vec<JsonRow<'a>>,
    notes: &'a [Note],
}

#[derive(Serialize)]
struct JsonIdeals {
    positive: Vec<[f64; 3]>,
    negative: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    alternative: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fuzzy_average: Option<[f64; 3]>,
    s_plus: f64,
    s_minus: f64,
    cc: f64,
    rank: usize,
}

fn round_tfn(t: &Tfn, p: u32) -> [f64; 3] {
    t.to_array().map(|x| round_to(x, p))
}

fn render_json(result: &RankingResult, p: u32, notes: &[Note]) -> String {
    let report = JsonReport {
        ideal_strategy: result.ideals.strategy.to_string(),
        normalization: result.normalization.to_string(),
        precision: p,
        tie_epsilon: result.tie_policy.tie_epsilon,
        rounded_to: result.tie_policy.rounded_to,
        ideals: JsonIdeals {
            positive: result.ideals.positive.iter().map(|t| round_tfn(t, p)).collect(),
            negative: result.ideals.negative.iter().map(|t| round_tfn(t, p)).collect(),
        },
        rows: result
            .rows
            .iter()
            .map(|row| JsonRow {
                alternative: &row.alternative,
                fuzzy_average: fuzzy_average(result, &row.alternative).map(|t| round_tfn(&t, p)),
                s_plus: round_to(row.s_plus, p),
                s_minus: round_to(row.s_minus, p),
                cc: round_to(row.cc, p),
                rank: row.rank,
            })
            .collect(),
        notes,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    s
}

/// The scale as a two-column table.
pub fn render_scale(scale: &LinguisticScale) -> String {
    let width = scale
        .labels()
        .map(|l| l.chars().count())
        .chain(["term".len()])
        .max()
        .unwrap_or(0);
    let mut out = format!("scale: {}\n\n{:<width$}  triangular fuzzy number\n", scale.name(), "term");
    for (label, t) in scale.terms() {
        let _ = writeln!(out, "{label:<width$}  ({}, {}, {})", t.a(), t.b(), t.c());
    }
    out
}
