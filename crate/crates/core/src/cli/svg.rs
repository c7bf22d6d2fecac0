//! Minimal two-panel line chart of a sweep: mean `|S|/n` and mean `moves/n`
//! against α, one line per density.

use std::fmt::Write;

use super::experiment::SweepResult;

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn series(result: &SweepResult, y: impl Fn(&super::experiment::SweepGroup) -> f64) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for group in &result.groups {
        let label = format!("density {:.2}", group.density);
        let point = (group.alpha.to_f64(), y(group));
        match out.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push(point),
            None => out.push(Series {
                label,
                points: vec![point],
            }),
        }
    }
    out
}

fn panel(svg: &mut String, x0: f64, title: &str, data: &[Series], y_max: f64) {
    let px = |x: f64| x0 + MARGIN + x * (PANEL_W - 2.0 * MARGIN);
    let py = |y: f64| PANEL_H - MARGIN - (y / y_max) * (PANEL_H - 2.0 * MARGIN);
    let _ = writeln!(
        svg,
        r##"<text x="{:.1}" y="20" font-size="13" text-anchor="middle">{title}</text>"##,
        x0 + PANEL_W / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#000" points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}"/>"##,
        px(0.0),
        py(y_max),
        px(0.0),
        py(0.0),
        px(1.0),
        py(0.0)
    );
    for tick in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{tick}</text>"##,
            px(tick),
            PANEL_H - MARGIN + 14.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{:.2}</text>"##,
            px(0.0) - 4.0,
            py(tick * y_max) + 3.0,
            tick * y_max
        );
    }
    for (i, s) in data.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"##,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" font-size="10" fill="{color}">{}</text>"##,
            px(0.02),
            MARGIN + 12.0 * i as f64,
            s.label
        );
    }
}

pub fn render(result: &SweepResult) -> String {
    let ratio = series(result, |g| g.mean.set_ratio);
    let moves = series(result, |g| g.mean.moves / g.mean.n);
    let moves_max = moves
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0f64, f64::max)
        .max(0.1);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif">"##,
        2.0 * PANEL_W,
        PANEL_H
    );
    panel(&mut svg, 0.0, "mean |S|/n vs alpha", &ratio, 1.0);
    panel(
        &mut svg,
        PANEL_W,
        "mean moves/n vs alpha",
        &moves,
        moves_max,
    );
    svg.push_str("</svg>\n");
    svg
}
