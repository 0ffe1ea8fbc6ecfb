//! Static SVG line plots: slice norms against height, maximal-function
//! overlays and counterexample ratio trends.

use serde_json::Value;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f5fa8", "#c4452b", "#2c8c4a", "#7a4fa0"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a line.
    pub markers: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

fn nums(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?.iter().map(|x| x.as_f64()).collect()
}

/// The plot matching a command's result, if it has one.
pub fn plot_for(command: &str, r: &Value) -> Option<Plot> {
    match command {
        "extend" => {
            let ys = nums(&r["heights"])?;
            let (vals, label) = match nums(&r["slice_norms"]) {
                Some(n) => (n, "slice norm"),
                None => (nums(&r["sup_abs"])?, "sup |F|"),
            };
            Some(Plot {
                title: format!("{} extension", r["kind"].as_str().unwrap_or("")),
                x_label: "y".into(),
                y_label: label.into(),
                log_x: true,
                series: vec![Series { label: label.into(), points: ys.into_iter().zip(vals).collect(), markers: false }],
            })
        }
        "maximal" => {
            let x = nums(&r["x"])?;
            let f = nums(&r["f"])?;
            let m = nums(&r["mf"])?;
            Some(Plot {
                title: format!("{} maximal function ({} path)", r["op"].as_str().unwrap_or(""), r["path"].as_str().unwrap_or("")),
                x_label: "x".into(),
                y_label: "value".into(),
                log_x: false,
                series: vec![
                    Series { label: "|f|".into(), points: x.iter().cloned().zip(f).collect(), markers: false },
                    Series { label: "Mf".into(), points: x.into_iter().zip(m).collect(), markers: false },
                ],
            })
        }
        "counterexample" => {
            let ratios = nums(&r["ratio_trend"])?;
            Some(Plot {
                title: format!("lower-bound ratios, {} / {}", r["phi1"].as_str().unwrap_or(""), r["phi2"].as_str().unwrap_or("")),
                x_label: "k".into(),
                y_label: "LB(k+1) / LB(k)".into(),
                log_x: false,
                series: vec![Series {
                    label: "ratio".into(),
                    points: ratios.into_iter().enumerate().map(|(i, v)| ((i + 1) as f64, v)).collect(),
                    markers: true,
                }],
            })
        }
        _ => None,
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

fn label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn svg(&self) -> String {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|&(x, y)| (tx(x), y)))
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .collect();
        let (mut x0, mut x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let (mut y0, mut y1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.1), a.1.max(p.1)));
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        let pad = 0.05 * (y1 - y0).max(1e-12 * y1.abs().max(1.0));
        y0 -= pad;
        y1 += pad;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
        let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - LEFT - RIGHT,
            H - TOP - BOTTOM
        );
        for t in ticks(x0, x1) {
            let shown = if self.log_x { 10f64.powf(t) } else { t };
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="black"/><text x="{0:.2}" y="{3}" text-anchor="middle">{4}</text>"#,
                px(t),
                H - BOTTOM,
                H - BOTTOM + 5.0,
                H - BOTTOM + 18.0,
                label(shown)
            );
        }
        for t in ticks(y0, y1) {
            let _ = writeln!(
                s,
                r#"<line x1="{0}" y1="{1:.2}" x2="{2}" y2="{1:.2}" stroke="black"/><text x="{3}" y="{4:.2}" text-anchor="end">{5}</text>"#,
                LEFT - 5.0,
                py(t),
                LEFT,
                LEFT - 8.0,
                py(t) + 4.0,
                label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}{}</text>"#,
            (LEFT + W - RIGHT) / 2.0,
            H - 12.0,
            escape(&self.x_label),
            if self.log_x { " (log scale)" } else { "" }
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            (TOP + H - BOTTOM) / 2.0,
            escape(&self.y_label)
        );
        for (i, se) in self.series.iter().enumerate() {
            let c = COLORS[i % COLORS.len()];
            let p: Vec<(f64, f64)> = se
                .points
                .iter()
                .map(|&(x, y)| (tx(x), y))
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|(x, y)| (px(x), py(y)))
                .collect();
            if se.markers {
                for (x, y) in &p {
                    let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{c}"/>"#);
                }
            } else {
                let coords: Vec<String> = p.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, coords.join(" "));
            }
            let ly = TOP + 16.0 + 16.0 * i as f64;
            let lx = W - RIGHT - 110.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{c}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(&se.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
