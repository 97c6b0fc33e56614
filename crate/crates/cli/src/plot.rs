//! SVG rendering of a curve and its report.

use std::f64::consts::TAU;
use std::fmt::Write;

use trigcurve::curve::ClosedCurve;
use trigcurve::Complex64;

use crate::report::{CurveReport, Verdict};

#[derive(Debug, Clone, Copy)]
pub struct PlotOptions {
    pub samples: usize,
    pub annotate: bool,
    pub size: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { samples: 2048, annotate: true, size: 640.0 }
    }
}

const POSITIVE: &str = "#c0392b";
const NEGATIVE: &str = "#2471a3";
const UNSIGNED: &str = "#7f8c8d";

/// Maps the plane into the square viewport, y up.
struct Frame {
    center: Complex64,
    scale: f64,
    half: f64,
}

impl Frame {
    fn fit(points: &[Complex64], size: f64) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let extent = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        Frame { center: (lo + hi) / 2.0, scale: 0.85 * size / extent, half: size / 2.0 }
    }

    fn map(&self, p: Complex64) -> (f64, f64) {
        let q = (p - self.center) * self.scale;
        (self.half + q.re, self.half - q.im)
    }
}

pub fn render_svg(report: &CurveReport, curve: &dyn ClosedCurve, opts: &PlotOptions) -> String {
    let n = opts.samples.max(16);
    let points: Vec<Complex64> = (0..n).map(|i| curve.point(TAU * i as f64 / n as f64)).collect();
    let frame = Frame::fit(&points, opts.size);
    let size = opts.size;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut path = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = frame.map(*p);
        let _ = write!(path, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    path.push('Z');
    let _ = writeln!(svg, r#"<path d="{path}" fill="none" stroke="black" stroke-width="1.2"/>"#);

    if opts.annotate {
        for x in &report.crossings {
            let (cx, cy) = frame.map(x.w);
            let color = match x.sign {
                Some(1) => POSITIVE,
                Some(_) => NEGATIVE,
                None => UNSIGNED,
            };
            let _ = writeln!(svg, r#"<circle class="crossing" cx="{cx:.3}" cy="{cy:.3}" r="4" fill="{color}"/>"#);
        }
        if let Some(w) = &report.whitney {
            let (bx, by) = frame.map(curve.point(w.base_theta));
            let _ = writeln!(
                svg,
                r#"<rect class="base" x="{:.3}" y="{:.3}" width="8" height="8" fill="black"/>"#,
                bx - 4.0,
                by - 4.0
            );
        }
        let fmt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
        let legend = format!(
            "count {} / bound {}, rotation {}, {:?}",
            report.count.map_or("∞".to_string(), |c| c.to_string()),
            fmt(report.bound),
            fmt(report.rotation),
            report.verdict
        );
        let _ = writeln!(svg, r#"<text class="legend" x="10" y="{:.0}" font-family="sans-serif" font-size="14">{legend}</text>"#, size - 12.0);
        if report.verdict == Verdict::Exceptional {
            let why = report
                .reduction
                .as_ref()
                .map(|r| format!("{:?}", r.exceptional))
                .or_else(|| report.notes.first().cloned())
                .unwrap_or_default();
            let _ = writeln!(
                svg,
                r#"<text class="banner" x="10" y="22" font-family="sans-serif" font-size="16" fill="{POSITIVE}">Exceptional: {}</text>"#,
                escape(&why)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
