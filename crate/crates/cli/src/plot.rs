//! Minimal SVG line plots rendered from a CSV on disk.

use std::fmt::Write as _;
use std::path::Path;

use crate::table::{read_csv, Row};

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `svg_path` from the rows of `csv_path`.
pub fn render(csv_path: &Path, svg_path: &Path, title: &str) -> std::io::Result<()> {
    let table = read_csv(csv_path)?;
    let mut groups: Vec<(String, Vec<&Row>)> = Vec::new();
    for r in &table.rows {
        let key = format!("{} ({})", r.series, r.kind);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    let (x0, x1) = extent(table.rows.iter().map(|r| r.x));
    let (y0, y1) = extent(table.rows.iter().map(|r| r.value));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, esc(title));
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(s, r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/>"##, sx(xv), TOP, TOP + ph);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, sx(xv), TOP + ph + 18.0, tick(xv));
        let _ = writeln!(s, r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#ddd"/>"##, LEFT, sy(yv), LEFT + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 6.0, sy(yv) + 4.0, tick(yv));
    }
    for (gi, (key, rows)) in groups.iter().enumerate() {
        let color = COLORS[gi % COLORS.len()];
        let dash = if rows[0].kind == "mc" { "" } else { r#" stroke-dasharray="6 3""# };
        let pts: Vec<String> = rows
            .iter()
            .filter(|r| r.x.is_finite() && r.value.is_finite())
            .map(|r| format!("{:.2},{:.2}", sx(r.x), sy(r.value)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#, pts.join(" "));
        let ly = TOP + 14.0 + 18.0 * gi as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 24.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, esc(key));
    }
    s.push_str("</svg>\n");
    std::fs::write(svg_path, s)
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Table;

    #[test]
    fn renders_every_group() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::default();
        for i in 0..5 {
            t.push_exact(i as f64, (i * i) as f64, "analytic", "sq");
            t.push(i as f64, i as f64, (0.0, 1.0), "mc", "lin");
        }
        let csv = dir.path().join("a.csv");
        let svg = dir.path().join("a.svg");
        t.write(&csv).unwrap();
        render(&csv, &svg, "a & b").unwrap();
        let out = std::fs::read_to_string(&svg).unwrap();
        assert_eq!(out.matches("<polyline").count(), 2);
        assert!(out.contains("sq (analytic)") && out.contains("a &amp; b"));
    }
}
