//! Number-line SVG rendering of interval unions.

use std::collections::HashSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::rational::Rational;

const ROW_HEIGHT: f64 = 28.0;
const TOP: f64 = 20.0;
const LABEL_WIDTH: f64 = 70.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Clone, Debug)]
pub struct Row {
    pub label: String,
    pub set: IntervalUnion,
    pub color: String,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub rows: Vec<Row>,
    /// Leftmost data value, drawn at 5% of the plotting width.
    pub origin: Rational,
    /// Data units spanning 90% of the plotting width.
    pub span: Rational,
}

impl RenderSpec {
    /// Lays out `rows` so the widest row spans 90% of the track.
    pub fn new(width: f64, rows: Vec<(String, IntervalUnion)>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some((dup, _)) = rows.iter().find(|(l, _)| !seen.insert(l.clone())) {
            return Err(Error::Dimension(format!("duplicate row label {dup:?}")));
        }
        let lo = rows
            .iter()
            .filter_map(|(_, s)| s.min())
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let hi = rows
            .iter()
            .filter_map(|(_, s)| s.max())
            .max()
            .cloned()
            .unwrap_or_else(Rational::one);
        let mut span = &hi - &lo;
        if !span.is_positive() {
            span = Rational::one();
        }
        let height = TOP * 2.0 + ROW_HEIGHT * rows.len() as f64;
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(k, (label, set))| Row {
                label,
                set,
                color: PALETTE[k % PALETTE.len()].to_string(),
            })
            .collect();
        Ok(RenderSpec {
            width,
            height,
            rows,
            origin: lo,
            span,
        })
    }

    fn track(&self) -> (f64, f64) {
        let usable = self.width - LABEL_WIDTH - 10.0;
        (LABEL_WIDTH + 0.05 * usable, 0.9 * usable)
    }

    pub fn x_of(&self, v: &Rational) -> f64 {
        let (left, len) = self.track();
        left + ((v - &self.origin) / &self.span).to_f64() * len
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(spec: &RenderSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        spec.width, spec.height
    );
    let (left, len) = spec.track();
    for (k, row) in spec.rows.iter().enumerate() {
        let y = TOP + ROW_HEIGHT * (k as f64 + 0.5);
        let _ = writeln!(out, r#"<g class="row" id="row-{k}">"#);
        let _ = writeln!(
            out,
            r#"<text x="4" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            y + 4.0,
            escape(&row.label)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#bbbbbb" stroke-width="1"/>"##,
            left,
            left + len
        );
        for p in row.set.parts() {
            let x0 = spec.x_of(p.lo());
            let x1 = spec.x_of(p.hi());
            // Keep points and very short parts visible.
            let w = (x1 - x0).max(1.0);
            let _ = writeln!(
                out,
                r#"<rect x="{x0:.3}" y="{:.2}" width="{w:.3}" height="10" fill="{}"><title>[{}, {}]</title></rect>"#,
                y - 5.0,
                row.color,
                p.lo(),
                p.hi()
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}
