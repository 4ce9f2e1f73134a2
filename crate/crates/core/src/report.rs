//! Report rows, number formatting and CSV/JSON emission.
//!
//! CSV numbers carry 12 significant digits, use `.` as the decimal
//! separator and switch to scientific notation outside `[1e-5, 1e12)`.
//! Absent values are empty fields. Lines end in `\n`.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::surface::{CuboidPoint, Edge, Face};

/// Formats `v` with 12 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("exponent");
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, v)
    } else {
        sci
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Fixed 12 decimals, used for ratios.
pub fn fmt_fixed12(v: f64) -> String {
    format!("{v:.12}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `path`, or to `stdout` when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents)?,
        None => stdout.write_all(contents.as_bytes())?,
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Verified,
    Observation,
    ExcludedWindow,
    Violation,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Verified => "verified",
            RowStatus::Observation => "observation",
            RowStatus::ExcludedWindow => "excluded_window",
            RowStatus::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundScanRow {
    pub alpha: f64,
    pub bound_closed_form: f64,
    pub grid_max: f64,
    pub argmax: CuboidPoint,
    pub probe_max: f64,
    pub face_maxima: BTreeMap<Face, f64>,
    pub edge_maxima: BTreeMap<Edge, f64>,
    pub p_alpha: Option<f64>,
    pub status: RowStatus,
}

pub fn scan_table(rows: &[BoundScanRow]) -> CsvTable {
    let mut header: Vec<String> = [
        "alpha",
        "bound_closed_form",
        "grid_max",
        "argmax_p",
        "argmax_x",
        "argmax_y",
        "probe_max",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    header.extend(Face::ALL.iter().map(|f| format!("face_{f}")));
    header.extend(Edge::ALL.iter().map(|e| format!("edge_{e}")));
    header.push("p_alpha".into());
    header.push("status".into());
    let mut t = CsvTable {
        header,
        rows: Vec::new(),
    };
    for r in rows {
        let mut row = vec![
            fmt_num(r.alpha),
            fmt_num(r.bound_closed_form),
            fmt_num(r.grid_max),
            fmt_num(r.argmax.p),
            fmt_num(r.argmax.x),
            fmt_num(r.argmax.y),
            fmt_num(r.probe_max),
        ];
        row.extend(
            Face::ALL
                .iter()
                .map(|f| fmt_opt(r.face_maxima.get(f).copied())),
        );
        row.extend(
            Edge::ALL
                .iter()
                .map(|e| fmt_opt(r.edge_maxima.get(e).copied())),
        );
        row.push(fmt_opt(r.p_alpha));
        row.push(r.status.name().into());
        t.push(row);
    }
    t
}
