//! Static SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use fastimd::Series;

use crate::error::{FormatError, Result};
use crate::write::write_atomic;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub width: u32,
    pub height: u32,
    /// Legend label and data of every line.
    pub series: Vec<(String, Series)>,
}

impl PlotSpec {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            width: 800,
            height: 400,
            series: Vec::new(),
        }
    }

    pub fn with(mut self, label: impl Into<String>, series: Series) -> Self {
        self.series.push((label.into(), series));
        self
    }
}

/// Roughly `target` round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    let Some((_, first)) = spec.series.first() else {
        return Err(FormatError::InvalidPlot("no series"));
    };
    let (t0, t1) = (first.start(), first.end());
    if spec.series.iter().any(|(_, s)| s.start() != t0 || s.end() != t1) {
        return Err(FormatError::InvalidPlot("series do not share a time domain"));
    }
    let (mut y0, mut y1) = spec
        .series
        .iter()
        .flat_map(|(_, s)| s.values())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if y1 - y0 < 1e-12 * y0.abs().max(1.0) {
        y0 -= 1.0;
        y1 += 1.0;
    }

    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |t: f64| MARGIN_LEFT + (t - t0) / (t1 - t0) * plot_w;
    let py = |v: f64| MARGIN_TOP + (y1 - v) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );

    let (xt, xd) = ticks(t0, t1, 8);
    for t in xt {
        let x = px(t);
        let y = MARGIN_TOP + plot_h;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.xd$}</text>"#,
            y + 18.0
        );
    }
    let (yt, yd) = ticks(y0, y1, 6);
    for v in yt {
        let y = py(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT:.2}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.yd$}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }

    for (i, (_, series)) in spec.series.iter().enumerate() {
        let mut points = String::new();
        for (k, (&t, &v)) in series.times().iter().zip(series.values()).enumerate() {
            if k > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{:.2},{:.2}", px(t), py(v));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{points}"/>"#,
            PALETTE[i % PALETTE.len()]
        );
    }

    let _ = writeln!(svg, r#"<g class="legend">"#);
    for (i, (label, _)) in spec.series.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        let x = MARGIN_LEFT + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"#,
            y - 4.0,
            x + 20.0,
            y - 4.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 26.0, escape(label));
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_plot_svg(spec: &PlotSpec, path: &Path) -> Result<()> {
    Ok(write_atomic(path, render_svg(spec)?.as_bytes())?)
}
