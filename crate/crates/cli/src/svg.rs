//! Standalone SVG overlay bar charts.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const LEGEND_ROW: f64 = 16.0;

const INPUT_FILLS: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"];
const CENTROID_STROKES: [&str; 3] = ["#000000", "#888888", "#b07aa1"];

/// A named histogram to draw.
#[derive(Debug, Clone, Copy)]
pub struct Series<'a> {
    pub label: &'a str,
    pub bins: &'a [f64],
}

/// Inputs as translucent filled bars, centroids as step outlines on top.
///
/// All series must share one bin count. The output depends only on the
/// arguments.
pub fn overlay_chart(title: &str, inputs: &[Series], centroids: &[Series]) -> String {
    let d = inputs
        .iter()
        .chain(centroids)
        .map(|s| s.bins.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let top = inputs
        .iter()
        .chain(centroids)
        .flat_map(|s| s.bins.iter().copied())
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let top = if top > 0.0 { top } else { 1.0 };
    let legend_rows = (inputs.len() + centroids.len()) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let total_h = HEIGHT + legend_rows * LEGEND_ROW;
    let bar_w = plot_w / d as f64;
    let x = |i: usize| MARGIN + i as f64 * bar_w;
    let y = |v: f64| MARGIN + plot_h * (1.0 - (v / top).clamp(0.0, 1.0));
    let base = MARGIN + plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{total_h}" viewBox="0 0 {WIDTH} {total_h}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{WIDTH}" height="{total_h}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        s,
        r##"<path d="M{m:.3} {m:.3} V{base:.3} H{r:.3}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        m = MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        MARGIN + 4.0,
        crate::report::fmt_num(top)
    );

    for (k, series) in inputs.iter().enumerate() {
        let fill = INPUT_FILLS[k % INPUT_FILLS.len()];
        let _ = writeln!(s, r#"<g fill="{fill}" fill-opacity="0.35">"#);
        for (i, &v) in series.bins.iter().enumerate() {
            if v > 0.0 {
                let top_y = y(v);
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    x(i),
                    top_y,
                    bar_w,
                    base - top_y
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }

    for (k, series) in centroids.iter().enumerate() {
        let stroke = CENTROID_STROKES[k % CENTROID_STROKES.len()];
        let mut path = format!("M{:.3} {:.3}", x(0), base);
        for (i, &v) in series.bins.iter().enumerate() {
            let _ = write!(path, " V{:.3} H{:.3}", y(v), x(i + 1));
        }
        let _ = write!(path, " V{base:.3}");
        let _ = writeln!(
            s,
            r#"<path d="{path}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#
        );
    }

    let legend = inputs
        .iter()
        .enumerate()
        .map(|(k, se)| (se.label, INPUT_FILLS[k % INPUT_FILLS.len()], true))
        .chain(
            centroids
                .iter()
                .enumerate()
                .map(|(k, se)| (se.label, CENTROID_STROKES[k % CENTROID_STROKES.len()], false)),
        );
    for (row, (label, color, filled)) in legend.enumerate() {
        let ly = HEIGHT + row as f64 * LEGEND_ROW;
        let style = if filled {
            format!(r#"fill="{color}" fill-opacity="0.35""#)
        } else {
            format!(r#"fill="none" stroke="{color}" stroke-width="1.5""#)
        };
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="10" height="10" {style}/>"#,
            MARGIN,
            ly - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN + 16.0,
            ly,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}
