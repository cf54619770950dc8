//! Table and plot-data output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tr1da::Variant;

use crate::aggregate::AggregateRow;
use crate::campaign::Format;
use crate::error::{BenchError, Result};

pub const CSV_HEADERS: [&str; 10] = [
    "epsilon",
    "variant",
    "nsucc",
    "nprob",
    "its",
    "costf",
    "costg",
    "rel_its",
    "rel_costf",
    "rel_costg",
];

pub fn emit(rows: &[AggregateRow], format: Format) -> Result<String> {
    match format {
        Format::Markdown => Ok(to_markdown(rows)),
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

fn opt2(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

// A variant that solved nothing has no means.
fn mean2(x: f64) -> String {
    if x.is_nan() {
        "-".to_string()
    } else {
        format!("{x:.2}")
    }
}

pub fn to_markdown(rows: &[AggregateRow]) -> String {
    let mut out = String::new();
    out.push_str("| ε | Variant | nsucc | its. | costf | costg | rel. its. | rel. costf | rel. costg |\n");
    out.push_str("|---|---|--:|--:|--:|--:|--:|--:|--:|\n");
    let mut last_eps = None;
    for r in rows {
        let eps = if last_eps == Some(r.epsilon) {
            String::new()
        } else {
            format!("{:.0e}", r.epsilon)
        };
        last_eps = Some(r.epsilon);
        let _ = writeln!(
            out,
            "| {eps} | {} | {}/{} | {} | {} | {} | {} | {} | {} |",
            r.variant.label(),
            r.nsucc,
            r.nprob,
            mean2(r.mean_its),
            mean2(r.mean_costf),
            mean2(r.mean_costg),
            opt2(r.rel_its),
            opt2(r.rel_costf),
            opt2(r.rel_costg),
        );
    }
    out
}

fn opt_exact(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with full-precision numbers, so that [`parse_csv`] recovers the rows exactly.
pub fn to_csv(rows: &[AggregateRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADERS)?;
    for r in rows {
        w.write_record([
            format!("{:e}", r.epsilon),
            r.variant.label().to_string(),
            r.nsucc.to_string(),
            r.nprob.to_string(),
            r.mean_its.to_string(),
            r.mean_costf.to_string(),
            r.mean_costg.to_string(),
            opt_exact(r.rel_its),
            opt_exact(r.rel_costf),
            opt_exact(r.rel_costg),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn variant_from_label(label: &str) -> Result<Variant> {
    Variant::ALL
        .into_iter()
        .find(|v| v.label() == label || v.as_str() == label)
        .ok_or_else(|| BenchError::Usage(format!("unknown variant '{label}'")))
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| BenchError::Usage(format!("bad {what} value '{field}'")))
}

fn parse_opt(field: &str, what: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_num(field, what).map(Some)
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<AggregateRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_HEADERS) {
        return Err(BenchError::Usage(format!("unexpected csv headers: {headers:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(AggregateRow {
            epsilon: parse_num(&rec[0], "epsilon")?,
            variant: variant_from_label(&rec[1])?,
            nsucc: parse_num(&rec[2], "nsucc")?,
            nprob: parse_num(&rec[3], "nprob")?,
            mean_its: parse_num(&rec[4], "its")?,
            mean_costf: parse_num(&rec[5], "costf")?,
            mean_costg: parse_num(&rec[6], "costg")?,
            rel_its: parse_opt(&rec[7], "rel_its")?,
            rel_costf: parse_opt(&rec[8], "rel_costf")?,
            rel_costg: parse_opt(&rec[9], "rel_costg")?,
        });
    }
    Ok(rows)
}

/// Bar heights for one variant, one entry per ε in [`PlotData::epsilons`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantBars {
    /// Solved problems over attempted problems.
    pub success_ratio: Vec<f64>,
    pub rel_its: Vec<Option<f64>>,
    pub rel_costf: Vec<Option<f64>>,
    pub rel_costg: Vec<Option<f64>>,
}

/// Grouped-bar data: reliability and iterations in one figure, f and g
/// costs in the other. The baseline's relative bars are 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub epsilons: Vec<f64>,
    pub variants: BTreeMap<String, VariantBars>,
}

pub fn plot_data(rows: &[AggregateRow]) -> PlotData {
    let mut epsilons: Vec<f64> = Vec::new();
    for r in rows {
        if !epsilons.contains(&r.epsilon) {
            epsilons.push(r.epsilon);
        }
    }
    let mut variants = BTreeMap::new();
    let mut seen: Vec<Variant> = rows.iter().map(|r| r.variant).collect();
    seen.sort();
    seen.dedup();
    for v in seen {
        let lookup = |e: f64| rows.iter().find(|r| r.variant == v && r.epsilon == e);
        let rel = |e: f64, pick: fn(&AggregateRow) -> Option<f64>| {
            let row = lookup(e)?;
            if v == Variant::Lmqn {
                Some(1.0)
            } else {
                pick(row)
            }
        };
        variants.insert(
            v.label().to_string(),
            VariantBars {
                success_ratio: epsilons
                    .iter()
                    .map(|&e| lookup(e).map_or(f64::NAN, |r| r.success_fraction()))
                    .collect(),
                rel_its: epsilons.iter().map(|&e| rel(e, |r| r.rel_its)).collect(),
                rel_costf: epsilons.iter().map(|&e| rel(e, |r| r.rel_costf)).collect(),
                rel_costg: epsilons.iter().map(|&e| rel(e, |r| r.rel_costg)).collect(),
            },
        );
    }
    PlotData { epsilons, variants }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [AggregateRow],
    plot: PlotData,
}

pub fn to_json(rows: &[AggregateRow]) -> Result<String> {
    let report = JsonReport {
        rows,
        plot: plot_data(rows),
    };
    Ok(serde_json::to_string_pretty(&report)?)
}
