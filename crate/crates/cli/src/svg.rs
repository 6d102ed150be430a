//! Minimal line-chart SVG writer for the figure outputs.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

pub enum Element {
    Line { points: Vec<(f64, f64)>, stroke: String, width: f64, opacity: f64, label: Option<String> },
    /// Shaded region between two curves sampled at the same x values.
    Band { xs: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>, fill: String, opacity: f64 },
    HLine { y: f64, label: String },
    VLine { x: f64, label: String },
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub elements: Vec<Element>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64, step: f64) -> String {
    if v != 0.0 && !(1e-3..1e6).contains(&step) {
        format!("{v:.2e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Extends a range slightly so curves do not sit on the frame.
pub fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

impl Chart {
    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }

    fn polyline(&self, pts: impl Iterator<Item = (f64, f64)>) -> String {
        let mut s = String::new();
        for (x, y) in pts {
            let _ = write!(s, "{:.2},{:.2} ", self.sx(x), self.sy(y));
        }
        s.trim_end().to_string()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (x0, x1) = (self.sx(self.x_range.0), self.sx(self.x_range.1));
        let (y0, y1) = (self.sy(self.y_range.0), self.sy(self.y_range.1));
        let _ = writeln!(s, r#"<defs><clipPath id="plot"><rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#, x1 - x0, y0 - y1);

        let x_step = nice_step(self.x_range.1 - self.x_range.0);
        for t in ticks(self.x_range.0, self.x_range.1) {
            let x = self.sx(t);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##, y0 + 5.0);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y0 + 18.0, fmt_tick(t, x_step));
        }
        let y_step = nice_step(self.y_range.1 - self.y_range.0);
        for t in ticks(self.y_range.0, self.y_range.1) {
            let y = self.sy(t);
            let _ = writeln!(s, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="#000"/>"##, x0 - 5.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, fmt_tick(t, y_step));
        }

        let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
        let mut legend = Vec::new();
        for el in &self.elements {
            match el {
                Element::Band { xs, lower, upper, fill, opacity } => {
                    let fwd = xs.iter().copied().zip(upper.iter().copied());
                    let back = xs.iter().copied().zip(lower.iter().copied()).rev();
                    let pts = self.polyline(fwd.chain(back));
                    let _ = writeln!(s, r#"<polygon points="{pts}" fill="{fill}" fill-opacity="{opacity}" stroke="none"/>"#);
                }
                Element::Line { points, stroke, width, opacity, label } => {
                    let pts = self.polyline(points.iter().copied());
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}" stroke-opacity="{opacity}"/>"#
                    );
                    if let Some(l) = label {
                        legend.push((l.clone(), stroke.clone()));
                    }
                }
                Element::HLine { y, label } => {
                    let yy = self.sy(*y);
                    let _ = writeln!(s, r##"<line x1="{x0:.2}" y1="{yy:.2}" x2="{x1:.2}" y2="{yy:.2}" stroke="#000" stroke-dasharray="6,4"/>"##);
                    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, x1 - 4.0, yy - 4.0);
                }
                Element::VLine { x, label } => {
                    let xx = self.sx(*x);
                    let _ = writeln!(s, r##"<line x1="{xx:.2}" y1="{y0:.2}" x2="{xx:.2}" y2="{y1:.2}" stroke="#000" stroke-dasharray="6,4"/>"##);
                    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, xx + 4.0, y1 + 14.0);
                }
            }
        }
        let _ = writeln!(s, "</g>");

        let _ = writeln!(s, r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##, x1 - x0, y0 - y1);
        let _ = writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#, (x0 + x1) / 2.0, self.title);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, HEIGHT - 12.0, self.x_label);
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            self.y_label
        );
        // Legend sits in the lower right, where the figures leave space.
        let lx = x1 - 150.0;
        for (i, (label, color)) in legend.iter().enumerate() {
            let y = y0 - 16.0 * (legend.len() - i) as f64;
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2.5"/>"#, lx, lx + 24.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, lx + 30.0, y + 4.0);
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Distinct colors for multi-series charts.
pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_spacing() {
        assert_eq!(ticks(0.0, 500.0), vec![0.0, 100.0, 200.0, 300.0, 400.0, 500.0]);
        assert_eq!(fmt_tick(2.0e-42, 1.0e-42), "2.00e-42");
        assert_eq!(fmt_tick(0.5, 0.5), "0.5");
        assert_eq!(ticks(0.0, 40.0), vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
    }

    #[test]
    fn renders_all_elements() {
        let chart = Chart {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_range: (0.0, 10.0),
            y_range: (0.0, 5.0),
            elements: vec![
                Element::Band { xs: vec![0.0, 10.0], lower: vec![1.0, 1.0], upper: vec![2.0, 2.0], fill: "#ccc".into(), opacity: 0.5 },
                Element::Line { points: vec![(0.0, 1.5), (10.0, 1.5)], stroke: "#000".into(), width: 2.0, opacity: 1.0, label: Some("mean".into()) },
                Element::HLine { y: 3.0, label: "d*".into() },
                Element::VLine { x: 4.0, label: "v".into() },
            ],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains(">mean</text>"));
    }
}
