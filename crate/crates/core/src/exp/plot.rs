//! Self-contained SVG line charts of proportion against density.

use std::fmt::Write as _;

use super::{CurvePoint, Property};
use crate::error::{Error, Result};
use crate::theory::TheoryCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// One labelled polyline.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub id: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    /// One series per property present, each labelled with its parameters.
    pub fn from_sweep(points: &[CurvePoint]) -> Vec<Series> {
        let mut out: Vec<(Property, Series)> = Vec::new();
        for p in points {
            match out.iter_mut().find(|(prop, _)| *prop == p.property) {
                Some((_, s)) => s.points.push((p.c, p.p_hat)),
                None => out.push((
                    p.property,
                    Series {
                        id: format!("{} a={} e={} n={} m={}", p.property, p.a, p.e, p.n, p.m),
                        points: vec![(p.c, p.p_hat)],
                    },
                )),
            }
        }
        out.into_iter().map(|(_, s)| s).collect()
    }

    pub fn from_curve(curve: &TheoryCurve) -> Series {
        Series { id: curve.id.to_string(), points: curve.points.clone() }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Axes span `[0, max c] × [0, 1]`.
pub fn render_svg(series: &[Series]) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::invalid("nothing to plot: every series needs at least one point"));
    }
    let max_c = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(0.0, f64::max);
    // a single density still needs a non-degenerate x range
    let x_span = if max_c > 0.0 { max_c } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |c: f64| LEFT + c / x_span * plot_w;
    let sy = |p: f64| TOP + (1.0 - p.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, y0, x1, y1) = (sx(0.0), sy(0.0), sx(x_span), sy(1.0));
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for i in 0..=5 {
        let t = f64::from(i) / 5.0;
        let (x, y) = (sx(t * x_span), sy(t));
        let _ = writeln!(svg, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            super::io::sig(t * x_span, 3)
        );
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y + 4.0,
            super::io::sig(t, 2)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">c</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">proportion</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(c, p)| format!("{:.2},{:.2}", sx(c), sy(p)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 20.0 * i as f64 + 10.0;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>"#,
            lx + 20.0
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 25.0, ly + 4.0, escape(&s.id));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
