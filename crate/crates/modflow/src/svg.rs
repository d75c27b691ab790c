//! Minimal deterministic line plots: fixed view box, fixed palette, fixed
//! number formatting.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn draw_panel(out: &mut String, p: &Panel, y0: f64) {
    let ty = |v: f64| if p.log_y { v.max(1e-300).log10() } else { v };
    let (xl, xh) = bounds(p.series.iter().flat_map(|s| s.points.iter().map(|q| q.0)));
    let (yl, yh) = bounds(p.series.iter().flat_map(|s| s.points.iter().map(|q| ty(q.1))));
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let sx = |x: f64| MARGIN + (x - xl) / (xh - xl) * pw;
    let sy = |y: f64| y0 + HEIGHT - MARGIN - (ty(y) - yl) / (yh - yl) * ph;

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN:.1}" y="{:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#,
        y0 + MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        y0 + MARGIN / 2.0,
        escape(&p.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        y0 + HEIGHT - 12.0,
        escape(&p.x_label)
    );
    let ylab = if p.log_y {
        format!("log10 {}", p.y_label)
    } else {
        p.y_label.clone()
    };
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {:.1})">{}</text>"#,
        y0 + HEIGHT / 2.0,
        y0 + HEIGHT / 2.0,
        escape(&ylab)
    );
    for (v, anchor, x, y) in [
        (xl, "start", MARGIN, y0 + HEIGHT - MARGIN + 14.0),
        (xh, "end", WIDTH - MARGIN, y0 + HEIGHT - MARGIN + 14.0),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}" font-size="10">{v:.3}</text>"#
        );
    }
    for (v, y) in [(yl, y0 + HEIGHT - MARGIN), (yh, y0 + MARGIN + 8.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" font-size="10">{v:.3}</text>"#,
            MARGIN - 4.0
        );
    }
    for (i, s) in p.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|q| q.0.is_finite() && ty(q.1).is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            y0 + MARGIN + 12.0 * (i as f64 + 1.0),
            escape(&s.name)
        );
    }
}

/// Panels stacked vertically in one document.
pub fn render(panels: &[Panel]) -> String {
    let total = HEIGHT * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH:.0} {total:.0}" width="{WIDTH:.0}" height="{total:.0}" font-family="sans-serif">"#
    );
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut out, p, HEIGHT * i as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_and_escaped() {
        let p = Panel {
            title: "a<b".into(),
            x_label: "t".into(),
            y_label: "x".into(),
            log_y: true,
            series: vec![Series {
                name: "s".into(),
                points: vec![(0.0, 1.0), (1.0, 0.0), (2.0, 1e-3)],
            }],
        };
        let a = render(std::slice::from_ref(&p));
        assert_eq!(a, render(&[p]));
        assert!(a.contains("a&lt;b") && a.starts_with("<svg"));
    }
}
