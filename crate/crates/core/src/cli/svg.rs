//! Minimal deterministic SVG plots of sag curves.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22",
];

/// One curve as runs of `(z, y)` points; gaps split the runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub runs: Vec<Vec<(f64, f64)>>,
    pub dashed: bool,
    pub label: String,
}

impl Curve {
    /// Splits on `None` samples.
    pub fn from_samples(samples: impl IntoIterator<Item = Option<(f64, f64)>>, dashed: bool, label: String) -> Self {
        let mut runs = vec![Vec::new()];
        for s in samples {
            match s {
                Some(p) if p.0.is_finite() && p.1.is_finite() => runs.last_mut().expect("non-empty").push(p),
                _ => {
                    if !runs.last().expect("non-empty").is_empty() {
                        runs.push(Vec::new());
                    }
                }
            }
        }
        runs.retain(|r| !r.is_empty());
        Self { runs, dashed, label }
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    z0: f64,
    z1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn of(curves: &[Curve]) -> Self {
        let pts = curves.iter().flat_map(|c| c.runs.iter().flatten());
        let (mut z0, mut z1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(z, y) in pts {
            z0 = z0.min(z);
            z1 = z1.max(z);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !z0.is_finite() {
            (z0, z1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (z0, z1) = pad(z0, z1);
        let (y0, y1) = pad(y0, y1);
        Self { z0, z1, y0, y1 }
    }

    fn px(&self, z: f64, y: f64) -> (f64, f64) {
        let x = MARGIN + (z - self.z0) / (self.z1 - self.z0) * (WIDTH - 2.0 * MARGIN);
        let v = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN);
        (x, v)
    }
}

pub fn render(curves: &[Curve]) -> String {
    let frame = Frame::of(curves);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // axes through the vertex when it is in view
    let (ax, ay) = frame.px(0.0, 0.0);
    let (left, top) = (MARGIN, MARGIN);
    let (right, bottom) = (WIDTH - MARGIN, HEIGHT - MARGIN);
    let ax = ax.clamp(left, right);
    let ay = ay.clamp(top, bottom);
    let _ = writeln!(
        s,
        r#"<line x1="{left:.3}" y1="{ay:.3}" x2="{right:.3}" y2="{ay:.3}" stroke="black" stroke-width="0.5"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ax:.3}" y1="{top:.3}" x2="{ax:.3}" y2="{bottom:.3}" stroke="black" stroke-width="0.5"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-size="14" font-family="sans-serif">z</text>"#,
        right + 8.0,
        ay + 4.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-size="14" font-family="sans-serif">y</text>"#,
        ax - 4.0,
        top - 8.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if c.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        for run in &c.runs {
            let mut pts = String::new();
            for (j, &(z, y)) in run.iter().enumerate() {
                let (x, v) = frame.px(z, y);
                if j > 0 {
                    pts.push(' ');
                }
                let _ = write!(pts, "{x:.3},{v:.3}");
            }
            let _ = writeln!(
                s,
                r#"<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#
            );
        }
        let ly = MARGIN + 16.0 * i as f64;
        let lx = WIDTH - MARGIN - 130.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.3}" y1="{ly:.3}" x2="{:.3}" y2="{ly:.3}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_split_on_gaps() {
        let c = Curve::from_samples(
            [Some((0.0, 0.0)), None, None, Some((1.0, 1.0)), Some((2.0, 2.0))],
            false,
            "a".into(),
        );
        assert_eq!(c.runs.len(), 2);
        assert_eq!(c.runs[1].len(), 2);
    }

    #[test]
    fn canvas_size_and_dash() {
        let c = Curve::from_samples([Some((0.0, -1.0)), Some((1.0, 1.0))], true, "x".into());
        let s = render(&[c]);
        assert!(s.contains(r#"width="800" height="600""#));
        assert!(s.contains("stroke-dasharray"));
        assert!(s.ends_with("</svg>\n"));
    }
}
