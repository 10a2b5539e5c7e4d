//! Minimal static SVG charts: line plots and heatmaps with labeled axes.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 100.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    fn map(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log => v.log10(),
        }
    }
}

pub struct Axes<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x_scale: Scale,
    pub y_scale: Scale,
}

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn header(svg: &mut String, axes: &Axes) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(axes.title)
    );
}

fn tick_label(v: f64, scale: Scale) -> String {
    match scale {
        Scale::Log => format!("1e{v:.0}"),
        Scale::Linear if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) => format!("{v:.1e}"),
        Scale::Linear => format!("{v:.2}"),
    }
}

fn frame_axes(svg: &mut String, frame: &Frame, axes: &Axes) {
    let (x0, x1) = (frame.px(frame.x.0), frame.px(frame.x.1));
    let (y0, y1) = (frame.py(frame.y.0), frame.py(frame.y.1));
    let _ = writeln!(
        svg,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            tick_label(xv, axes.x_scale)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(yv, axes.y_scale)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(axes.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{0:.2}" text-anchor="middle" transform="rotate(-90 20 {0:.2})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(axes.y_label)
    );
}

pub fn line_chart(axes: &Axes, series: &[Series]) -> String {
    let mapped: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .map(|&(x, y)| (axes.x_scale.map(x), axes.y_scale.map(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect()
        })
        .collect();
    let frame = Frame {
        x: range(mapped.iter().flatten().map(|p| p.0)),
        y: range(mapped.iter().flatten().map(|p| p.1)),
    };
    let mut svg = String::new();
    header(&mut svg, axes);
    frame_axes(&mut svg, &frame, axes);
    for (i, (s, pts)) in series.iter().zip(&mapped).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                frame.px(x),
                frame.py(y)
            );
        }
        let ly = TOP + 16.0 * i as f64 + 10.0;
        let lx = WIDTH - RIGHT + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 16.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            ly + 4.0,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Blue-white-red: negative values blue, zero white, positive red, on a
/// symmetric scale so the sign boundary is visible.
fn diverging(v: f64, bound: f64) -> String {
    let f = if bound > 0.0 { (v / bound).clamp(-1.0, 1.0) } else { 0.0 };
    let (r, g, b) = if f >= 0.0 {
        (255.0, 255.0 * (1.0 - f), 255.0 * (1.0 - f))
    } else {
        (255.0 * (1.0 + f), 255.0 * (1.0 + f), 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// `values[i][j]` is the value at `(xs[i], ys[j])`.
pub fn heatmap(axes: &Axes, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let half = |v: &[f64], i: usize| -> (f64, f64) {
        let left = if i > 0 {
            0.5 * (v[i] - v[i - 1])
        } else if v.len() > 1 {
            0.5 * (v[1] - v[0])
        } else {
            0.5
        };
        let right = if i + 1 < v.len() { 0.5 * (v[i + 1] - v[i]) } else { left };
        (v[i] - left, v[i] + right)
    };
    let frame = Frame {
        x: if xs.is_empty() {
            (0.0, 1.0)
        } else {
            (half(xs, 0).0, half(xs, xs.len() - 1).1)
        },
        y: if ys.is_empty() {
            (0.0, 1.0)
        } else {
            (half(ys, 0).0, half(ys, ys.len() - 1).1)
        },
    };
    let bound = values
        .iter()
        .flatten()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut svg = String::new();
    header(&mut svg, axes);
    for (i, row) in values.iter().enumerate() {
        let (xa, xb) = half(xs, i);
        for (j, &v) in row.iter().enumerate() {
            let (ya, yb) = half(ys, j);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                frame.px(xa),
                frame.py(yb),
                frame.px(xb) - frame.px(xa) + 0.3,
                frame.py(ya) - frame.py(yb) + 0.3,
                diverging(v, bound)
            );
        }
    }
    frame_axes(&mut svg, &frame, axes);
    // Color bar.
    let bx = WIDTH - RIGHT + 20.0;
    let steps = 50;
    let h = (HEIGHT - TOP - BOTTOM) / steps as f64;
    for k in 0..steps {
        let v = bound * (1.0 - 2.0 * (k as f64 + 0.5) / steps as f64);
        let _ = writeln!(
            svg,
            r#"<rect x="{bx}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            TOP + h * k as f64,
            h + 0.3,
            diverging(v, bound)
        );
    }
    for (v, y) in [
        (bound, TOP),
        (0.0, (HEIGHT - BOTTOM + TOP) / 2.0),
        (-bound, HEIGHT - BOTTOM),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}">{}</text>"#,
            bx + 20.0,
            y + 4.0,
            tick_label(v, Scale::Linear)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
