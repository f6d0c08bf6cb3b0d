//! Minimal SVG: ruled partition diagrams and log-log curves.

use std::fmt::Write;

use kakutani::rational::format_rational;
use rug::Rational;

const WIDTH: f64 = 860.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const ROW: f64 = 44.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn label(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format_rational(q)
    }
}

/// One ruled line per level with a tick at every endpoint; endpoints new
/// at a level are labelled when there is room.
pub fn partition_figure(levels: &[Vec<Rational>]) -> String {
    let height = ROW * (levels.len() as f64 + 1.0);
    let span = WIDTH - LEFT - RIGHT;
    let xpos = |q: &Rational| LEFT + span * q.to_f64();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    let mut previous: &[Rational] = &[];
    for (n, ends) in levels.iter().enumerate() {
        let y = ROW * (n as f64 + 0.75);
        let _ = writeln!(out, r#"<text x="8" y="{:.1}" font-size="12">P{n}</text>"#, y + 4.0);
        let _ = writeln!(out, r#"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#, WIDTH - RIGHT);
        let mut last_label = f64::NEG_INFINITY;
        for e in ends {
            let x = xpos(e);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#,
                y - 6.0,
                y + 6.0
            );
            let fresh = previous.binary_search(e).is_err();
            if fresh && x - last_label > 26.0 {
                let _ = writeln!(
                    out,
                    r#"<text x="{x:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
                    y + 18.0,
                    label(e)
                );
                last_label = x;
            }
        }
        previous = ends;
    }
    out.push_str("</svg>\n");
    out
}

/// Line plot with logarithmic axes over `(x, y)` pairs, both positive.
pub fn log_log_plot(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let (w, h, m) = (640.0, 420.0, 60.0);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
    );
    if logs.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let (mut x0, mut x1) = logs.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (mut y0, mut y1) = logs.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    x0 = x0.floor();
    x1 = x1.ceil().max(x0 + 1.0);
    y0 = y0.floor();
    y1 = y1.ceil().max(y0 + 1.0);
    let px = |x: f64| m + (w - 2.0 * m) * (x - x0) / (x1 - x0);
    let py = |y: f64| h - m - (h - 2.0 * m) * (y - y0) / (y1 - y0);
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * m,
        h - 2.0 * m
    );
    let mut k = x0;
    while k <= x1 {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1e{k}</text>"#, px(k), h - m + 16.0);
        k += 1.0;
    }
    let mut k = y0;
    while k <= y1 {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{k}</text>"#, m - 6.0, py(k) + 4.0);
        k += 1.0;
    }
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, w / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">{}</text>"#,
        h / 2.0,
        h / 2.0,
        escape(y_label)
    );
    let path: Vec<String> = logs.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#, path.join(" "));
    for &(x, y) in &logs {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#, px(x), py(y));
    }
    out.push_str("</svg>\n");
    out
}
