//! Metrics reports (CSV) and the cross-method comparison table.
//!
//! A report holds one row per method and pair plus one summary row per
//! method whose `pair_index` is `all`. Infinite PSNR is written as `inf`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "method,pair_index,psnr_lp_db,hp_mean_energy,lp_entropy_bytes,hp_entropy_bytes,mvf_bytes";

/// Reference signal the lowpass PSNR is measured against.
pub const PSNR_REFERENCE: &str = "psnr_reference = odd (first) frame of each pair";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: String,
    /// `None` for the per-method summary row.
    pub pair: Option<usize>,
    pub psnr_lp_db: f64,
    pub hp_mean_energy: f64,
    pub lp_entropy_bytes: f64,
    pub hp_entropy_bytes: f64,
    pub mvf_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// Free-form header lines, written as `# ...` comments.
    pub notes: Vec<String>,
    pub rows: Vec<Row>,
}

fn fmt_db(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    match field {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => field
            .parse()
            .map_err(|_| Error::Report(format!("line {line}: bad number {field:?}"))),
    }
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        writeln!(out, "{CSV_HEADER}").unwrap();
        for r in &self.rows {
            let pair = r.pair.map_or_else(|| "all".to_string(), |p| p.to_string());
            writeln!(
                out,
                "{},{},{},{:.4},{:.2},{:.2},{}",
                r.method,
                pair,
                fmt_db(r.psnr_lp_db),
                r.hp_mean_energy,
                r.lp_entropy_bytes,
                r.hp_entropy_bytes,
                r.mvf_bytes
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut report = Report::default();
        let mut seen_header = false;
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(note) = line.strip_prefix('#') {
                report.notes.push(note.trim().to_string());
                continue;
            }
            if !seen_header {
                if line != CSV_HEADER {
                    return Err(Error::Report(format!("line {line_no}: unexpected header")));
                }
                seen_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::Report(format!("line {line_no}: expected 7 fields")));
            }
            let pair = match fields[1] {
                "all" => None,
                p => Some(
                    p.parse()
                        .map_err(|_| Error::Report(format!("line {line_no}: bad pair index")))?,
                ),
            };
            report.rows.push(Row {
                method: fields[0].to_string(),
                pair,
                psnr_lp_db: parse_f64(fields[2], line_no)?,
                hp_mean_energy: parse_f64(fields[3], line_no)?,
                lp_entropy_bytes: parse_f64(fields[4], line_no)?,
                hp_entropy_bytes: parse_f64(fields[5], line_no)?,
                mvf_bytes: fields[6]
                    .parse()
                    .map_err(|_| Error::Report(format!("line {line_no}: bad byte count")))?,
            });
        }
        if !seen_header {
            return Err(Error::Report("missing CSV header".into()));
        }
        Ok(report)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Report> {
        let path = path.as_ref();
        Report::parse(&fs::read_to_string(path).map_err(Error::io(path))?)
    }

    pub fn summaries(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.pair.is_none())
    }

    fn pair_set(&self) -> BTreeSet<usize> {
        self.rows.iter().filter_map(|r| r.pair).collect()
    }
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub label: String,
    pub psnr_lp_db: f64,
    pub hp_mean_energy: f64,
    pub total_entropy_bytes: f64,
    pub mvf_bytes: f64,
}

impl Entry {
    fn from_row(row: &Row) -> Entry {
        Entry {
            label: row.method.clone(),
            psnr_lp_db: row.psnr_lp_db,
            hp_mean_energy: row.hp_mean_energy,
            total_entropy_bytes: row.lp_entropy_bytes + row.hp_entropy_bytes,
            mvf_bytes: row.mvf_bytes as f64,
        }
    }

    fn mean(label: &str, items: &[Entry]) -> Entry {
        let n = items.len() as f64;
        let avg = |f: fn(&Entry) -> f64| items.iter().map(f).sum::<f64>() / n;
        Entry {
            label: label.to_string(),
            psnr_lp_db: avg(|e| e.psnr_lp_db),
            hp_mean_energy: avg(|e| e.hp_mean_energy),
            total_entropy_bytes: avg(|e| e.total_entropy_bytes),
            mvf_bytes: avg(|e| e.mvf_bytes),
        }
    }

    fn minus(&self, other: &Entry) -> Entry {
        Entry {
            label: format!("{} - {}", self.label, other.label),
            psnr_lp_db: difference(self.psnr_lp_db, other.psnr_lp_db),
            hp_mean_energy: difference(self.hp_mean_energy, other.hp_mean_energy),
            total_entropy_bytes: difference(self.total_entropy_bytes, other.total_entropy_bytes),
            mvf_bytes: difference(self.mvf_bytes, other.mvf_bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Per-method summaries averaged over the reports, in first-seen order.
    pub entries: Vec<Entry>,
    pub delta: Entry,
}

fn difference(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        a - b
    }
}

/// Compares the summary rows of at least two reports over the same pairs.
///
/// Each method's metrics are averaged over the reports that contain it. The
/// delta is `graph - mesh` when both methods are present; otherwise it is
/// the last report minus the first for the first listed method.
pub fn compare(reports: &[Report]) -> Result<Comparison> {
    if reports.len() < 2 {
        return Err(Error::Report("compare needs at least two reports".into()));
    }
    let pairs = reports[0].pair_set();
    if reports.iter().any(|r| r.pair_set() != pairs) {
        return Err(Error::Report("reports cover different pair sets".into()));
    }
    let mut methods: Vec<&str> = Vec::new();
    for row in reports.iter().flat_map(Report::summaries) {
        if !methods.contains(&row.method.as_str()) {
            methods.push(&row.method);
        }
    }
    if methods.is_empty() {
        return Err(Error::Report("reports contain no summary rows".into()));
    }
    let summary = |report: &Report, method: &str| report.summaries().find(|r| r.method == method).map(Entry::from_row);
    let entries: Vec<Entry> = methods
        .iter()
        .map(|m| {
            let items: Vec<Entry> = reports.iter().filter_map(|r| summary(r, m)).collect();
            Entry::mean(m, &items)
        })
        .collect();
    let find = |name: &str| entries.iter().find(|e| e.label == name);
    let delta = match (find("graph"), find("mesh")) {
        (Some(g), Some(m)) => g.minus(m),
        _ => {
            let method = methods[0];
            let first = reports.iter().find_map(|r| summary(r, method)).unwrap();
            let last = reports.iter().rev().find_map(|r| summary(r, method)).unwrap();
            let mut d = last.minus(&first);
            d.label = format!("{method}: last - first");
            d
        }
    };
    Ok(Comparison { entries, delta })
}

impl Comparison {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<28} {:>12} {:>16} {:>18} {:>10}",
            "method", "PSNR LP [dB]", "mean energy HP", "entropy LP+HP [B]", "MVF [B]"
        )
        .unwrap();
        let line = |out: &mut String, e: &Entry, label: &str| {
            writeln!(
                out,
                "{:<28} {:>12} {:>16.2} {:>18.1} {:>10.1}",
                label,
                fmt_db(e.psnr_lp_db),
                e.hp_mean_energy,
                e.total_entropy_bytes,
                e.mvf_bytes
            )
            .unwrap();
        };
        for e in &self.entries {
            line(&mut out, e, &e.label);
        }
        line(&mut out, &self.delta, &format!("delta {}", self.delta.label));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,psnr_lp_db,hp_mean_energy,total_entropy_bytes,mvf_bytes\n");
        for e in self.entries.iter().chain([&self.delta]) {
            writeln!(
                out,
                "{},{},{:.4},{:.2},{:.1}",
                e.label,
                fmt_db(e.psnr_lp_db),
                e.hp_mean_energy,
                e.total_entropy_bytes,
                e.mvf_bytes
            )
            .unwrap();
        }
        out
    }
}
