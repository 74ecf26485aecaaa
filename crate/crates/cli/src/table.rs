//! The CSV contract: `x,value,ci_low,ci_high,kind,series`, LF line endings,
//! every number with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use wyner_gauge_core::{Estimate, OutageCurve};

pub const HEADER: &str = "x,value,ci_low,ci_high,kind,series";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub kind: String,
    pub series: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub rows: Vec<Row>,
}

impl Table {
    pub fn push(&mut self, x: f64, value: f64, ci: (f64, f64), kind: &str, series: &str) {
        self.rows.push(Row {
            x,
            value,
            ci_low: ci.0,
            ci_high: ci.1,
            kind: kind.to_string(),
            series: series.to_string(),
        });
    }

    pub fn push_exact(&mut self, x: f64, value: f64, kind: &str, series: &str) {
        self.push(x, value, (value, value), kind, series);
    }

    pub fn push_estimate(&mut self, x: f64, e: &Estimate, series: &str) {
        self.push(x, e.mean, (e.ci95_low, e.ci95_high), "mc", series);
    }

    /// Appends a curve with `x` mapped from each threshold.
    pub fn push_curve(&mut self, curve: &OutageCurve, series: &str, x_of: impl Fn(f64) -> f64) {
        let kind = curve.kind.as_str();
        for (i, &t) in curve.thresholds.iter().enumerate() {
            self.push(x_of(t), curve.values[i], curve.ci95(i), kind, series);
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                num(r.x),
                num(r.value),
                num(r.ci_low),
                num(r.ci_high),
                r.kind,
                r.series
            );
        }
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses a file written by [`Table::write`].
pub fn read_csv(path: &Path) -> std::io::Result<Table> {
    let text = std::fs::read_to_string(path)?;
    let bad = |line: usize, what: &str| {
        std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}:{line}: {what}", path.display()))
    };
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    let mut table = Table::default();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(bad(i + 2, "expected 6 fields"));
        }
        let p = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 2, "bad number"));
        table.push(p(f[0])?, p(f[1])?, (p(f[2])?, p(f[3])?), f[4], f[5]);
    }
    Ok(table)
}
