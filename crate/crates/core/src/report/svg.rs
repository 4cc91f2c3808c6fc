use std::fmt::Write;
use std::path::Path;

use super::FRow;
use crate::error::{Error, Result};

/// `-2 log(4/e)`
pub const RATIONALITY_LIMIT: f64 = -2.0 * (2.0 * std::f64::consts::LN_2 - 1.0);

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn nice_step(span: f64, ticks: f64) -> f64 {
    let raw = span / ticks;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r <= 1.0 {
        1.0
    } else if r <= 2.0 {
        2.0
    } else if r <= 5.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn trim(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Scatter of `(n, F(n))` with reference lines at 0 and `-2 log(4/e)`.
pub fn render_figure1(rows: &[FRow]) -> Result<String> {
    let pts: Vec<(u64, f64)> = rows.iter().filter_map(|r| r.f_value().map(|f| (r.n, f))).collect();
    if pts.is_empty() {
        return Err(Error::InvalidInput("nothing to plot: no computed rows".into()));
    }
    let skipped: Vec<String> = rows.iter().filter(|r| !r.is_ok()).map(|r| r.n.to_string()).collect();

    let n_lo = pts.iter().map(|p| p.0).min().unwrap_or(1) as f64;
    let n_hi = pts.iter().map(|p| p.0).max().unwrap_or(1) as f64;
    let (x0, x1) = if n_hi > n_lo { (n_lo, n_hi) } else { (n_lo - 1.0, n_hi + 1.0) };
    let f_lo = pts.iter().map(|p| p.1).fold(RATIONALITY_LIMIT, f64::min);
    let f_hi = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let pad = 0.05 * (f_hi - f_lo).max(0.1);
    let (y0, y1) = (f_lo - pad, f_hi + pad);

    let px = |n: f64| LEFT + (n - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |f: f64| TOP + (y1 - f) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<!-- points: {} -->", pts.len());
    if !skipped.is_empty() {
        let _ = writeln!(s, "<!-- skipped n: {} -->", skipped.join(" "));
    }
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">F(n) = (1/n) log ||log S_n||</text>"#,
        W / 2.0
    );

    // axes
    let (ax0, ax1, ay0, ay1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(s, r#"<g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay1:.2}" x2="{ax1:.2}" y2="{ay1:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax0:.2}" y2="{ay1:.2}"/>"#);
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="ticks" text-anchor="middle">"#);
    let xs = nice_step(x1 - x0, 8.0).max(1.0);
    let mut t = (x0 / xs).ceil() * xs;
    while t <= x1 + 1e-9 {
        let x = px(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{ay1:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, ay1 + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}">{}</text>"#, ay1 + 18.0, trim(t));
        t += xs;
    }
    let ys = nice_step(y1 - y0, 6.0);
    let mut t = (y0 / ys).ceil() * ys;
    while t <= y1 + 1e-12 {
        let y = py(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{ax0:.2}" y2="{y:.2}" stroke="black"/>"#, ax0 - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, ax0 - 7.0, y + 4.0, trim(t));
        t += ys;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#, (ax0 + ax1) / 2.0, H - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">F(n)</text>"#,
        (ay0 + ay1) / 2.0,
        (ay0 + ay1) / 2.0
    );

    let _ = writeln!(s, r#"<g class="reference" stroke-dasharray="6 4">"#);
    for (f, colour, label) in [(0.0, "#555555", "0"), (RATIONALITY_LIMIT, "#c0392b", "-2 log(4/e)")] {
        let y = py(f);
        let _ = writeln!(
            s,
            r#"<line class="ref" x1="{ax0:.2}" y1="{y:.2}" x2="{ax1:.2}" y2="{y:.2}" stroke="{colour}"><title>{label}</title></line>"#
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="points" fill="#1f4e9c">"##);
    for (n, f) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"><title>n={n} F={f}</title></circle>"#, px(*n as f64), py(*f));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

/// Writes the plot to `path`.
pub fn emit_figure1(rows: &[FRow], path: &Path) -> Result<()> {
    let svg = render_figure1(rows)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u64, f: &str) -> FRow {
        FRow { f: f.into(), ..FRow::skipped(n, "x") }.with_status("ok")
    }

    impl FRow {
        fn with_status(mut self, s: &str) -> FRow {
            self.status = s.into();
            self
        }
    }

    #[test]
    fn structure() {
        let mut rows: Vec<FRow> = (1..=10).map(|n| row(n, &format!("-0.{}", 60 + n))).collect();
        rows.push(FRow::skipped(11, "precision"));
        let s = render_figure1(&rows).unwrap();
        assert_eq!(s.matches("<circle").count(), 10);
        assert_eq!(s.matches(r#"class="ref""#).count(), 2);
        assert!(s.contains("<!-- skipped n: 11 -->"));
        assert_eq!(s, render_figure1(&rows).unwrap());
        assert!(render_figure1(&[FRow::skipped(1, "x")]).is_err());
    }

    #[test]
    fn limit_constant() {
        assert!((RATIONALITY_LIMIT + 0.772_588_722).abs() < 1e-9);
    }
}
