//! Minimal SVG line plots of sweep output.
//!
//! One file per output column and per combination of the third and later
//! axes. The first axis is the abscissa; each value of the second axis is a
//! separate series. Gaps (unstable points) break the lines.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};

use super::emit::{columns, row};
use super::run::SweepResult;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

const NON_PLOTTED: [&str; 6] = [
    "stable",
    "near_divergence",
    "negative_pi_s",
    "discord_converged",
    "discord_clipped",
    "failure",
];

type Series = (String, Vec<(f64, Option<f64>)>);

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

fn label(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-2 || x.abs() >= 1e4) {
        format!("{x:.2e}")
    } else {
        format!("{x:.3}")
    }
}

/// Renders one panel as an SVG document.
pub fn render(title: &str, x_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|(_, s)| s.iter());
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        if let Some(y) = y.filter(|y| y.is_finite()) {
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        let pad = if y0 == 0.0 { 1.0 } else { y0.abs() * 0.1 };
        (y0, y1) = (y0 - pad, y1 + pad);
    }
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_T + ph,
            MARGIN_T + ph + 5.0,
            MARGIN_T + ph + 18.0,
            label(t)
        );
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_L - 5.0,
            MARGIN_L - 8.0,
            y + 4.0,
            label(t)
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let y = sy(0.0);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            MARGIN_L + pw
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        MARGIN_L + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="18" text-anchor="middle" font-weight="bold">{title}</text>"#,
        MARGIN_L + pw / 2.0
    );

    for (k, (name, data)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut segment = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for &(x, y) in data {
            match y.filter(|y| y.is_finite()) {
                Some(y) => segment.push(format!("{:.2},{:.2}", sx(x), sy(y))),
                None => flush(&mut segment, &mut s),
            }
        }
        flush(&mut segment, &mut s);
        let ly = MARGIN_T + 10.0 + 18.0 * k as f64;
        let lx = MARGIN_L + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn slug(x: f64) -> String {
    format!("{x}").replace('-', "m").replace('.', "p")
}

/// Writes the plots next to the configured output path.
pub fn write_plots(result: &SweepResult) -> Result<Vec<PathBuf>> {
    let cfg = &result.config;
    if cfg.axes.is_empty() {
        return Ok(Vec::new());
    }
    let cols = columns(cfg);
    let n_axes = cfg.axes.len();
    let rows: Vec<Vec<String>> = result.records.iter().map(|r| row(cfg, r)).collect();
    let parse = |c: &str| -> Option<f64> {
        if c.is_empty() {
            None
        } else {
            c.parse().ok()
        }
    };

    let out = &cfg.output_path;
    let dir = out.parent().map(PathBuf::from).unwrap_or_default();
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| cfg.name.clone());

    // Row-major order: index = (i * n_series + j) * n_rest + r.
    let n_x = cfg.axes[0].values.len();
    let n_series = cfg.axes.get(1).map_or(1, |a| a.values.len());
    let n_rest = result.records.len() / (n_x * n_series);
    let mut written = Vec::new();
    for (col_idx, col) in cols.iter().enumerate().skip(n_axes) {
        if NON_PLOTTED.contains(&col.as_str()) {
            continue;
        }
        for r in 0..n_rest {
            let mut series: Vec<Series> = Vec::with_capacity(n_series);
            for j in 0..n_series {
                let name = match cfg.axes.get(1) {
                    Some(a) => format!("{} = {}", a.name, label(a.values[j])),
                    None => col.clone(),
                };
                let data = (0..n_x)
                    .map(|i| {
                        let k = (i * n_series + j) * n_rest + r;
                        (result.records[k].coordinates[0], parse(&rows[k][col_idx]))
                    })
                    .collect();
                series.push((name, data));
            }
            let rest = &result.records[r].coordinates;
            let mut suffix = String::new();
            let mut title = col.clone();
            for (a, &v) in cfg.axes.iter().zip(rest).skip(2) {
                let _ = write!(suffix, "_{}{}", a.name, slug(v));
                let _ = write!(title, ", {} = {}", a.name, label(v));
            }
            let path = dir.join(format!("{stem}_{col}{suffix}.svg"));
            let doc = render(&title, cfg.axes[0].name.as_str(), &series);
            fs::write(&path, doc).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
