//! CSV and SVG output.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::run::{TrialRecord, TrialTiming};
use crate::stats::{summarize, SummaryRow};
use crate::BenchError;

fn write_csv<T: serde::Serialize, W: Write>(rows: &[T], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| BenchError::Io(PathBuf::from("<csv>"), e))?;
    Ok(())
}

pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), BenchError> {
    write_csv(records, out)
}

pub fn write_timings_csv<W: Write>(timings: &[TrialTiming], out: W) -> Result<(), BenchError> {
    write_csv(timings, out)
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), BenchError> {
    write_csv(rows, out)
}

pub fn read_trials_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>, BenchError> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(BenchError::from))
        .collect()
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#7f7f7f", "#9467bd", "#ff7f0e"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Line plot of mean per sweep value with CI whiskers, one series per
/// algorithm. Sweep values are placed at evenly spaced positions.
pub fn render_svg(rows: &[SummaryRow]) -> String {
    let mut xs: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut series: Vec<&str> = Vec::new();
    for r in rows {
        if !series.contains(&r.algorithm.as_str()) {
            series.push(&r.algorithm);
        }
    }
    let (mut lo, mut hi) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.lower), b.max(r.upper)));
    if !lo.is_finite() || !hi.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo, hi) = (lo - 0.5, hi + 0.5);
    }
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| {
        let i = xs.iter().position(|&v| v == x).unwrap_or(0) as f64;
        MARGIN + if xs.len() > 1 { i / (xs.len() - 1) as f64 * plot_w } else { plot_w / 2.0 }
    };
    let py = |y: f64| HEIGHT - MARGIN - (y - lo) / (hi - lo) * plot_h;

    let first = rows.first();
    let metric = first.map_or("ratio", |r| r.metric.as_str());
    let sweep_var = first.map_or("", |r| r.sweep_var.as_str());
    let title = first.map_or(String::new(), |r| format!("{} ({})", r.experiment, r.objective));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    );
    for &x in &xs {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{x}</text>"#,
            px(x),
            y0 + 18.0
        );
    }
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            x0 - 6.0,
            py(v) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(sweep_var)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">mean {metric}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (s, name) in series.iter().enumerate() {
        let color = COLORS[s % COLORS.len()];
        let mut pts: Vec<&SummaryRow> = rows.iter().filter(|r| r.algorithm == *name).collect();
        pts.sort_by(|a, b| a.sweep_value.total_cmp(&b.sweep_value));
        let _ = writeln!(svg, r#"<g class="series" data-algorithm="{}" stroke="{color}">"#, escape(name));
        let path: Vec<String> = pts.iter().map(|r| format!("{:.2},{:.2}", px(r.sweep_value), py(r.mean))).collect();
        let _ = writeln!(svg, r#"<polyline fill="none" points="{}"/>"#, path.join(" "));
        for r in &pts {
            let x = px(r.sweep_value);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
                py(r.lower),
                py(r.upper)
            );
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="{color}" data-x="{}" data-mean="{}" data-lower="{}" data-upper="{}"/>"#,
                py(r.mean),
                r.sweep_value,
                r.mean,
                r.lower,
                r.upper
            );
        }
        let _ = writeln!(svg, "</g>");
        let ly = MARGIN + 16.0 * s as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 6.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn create(path: &Path) -> Result<fs::File, BenchError> {
    fs::File::create(path).map_err(|e| BenchError::Io(path.to_path_buf(), e))
}

/// Writes `trials.csv`, `summary.csv` and, when given, `timings.csv` into
/// `dir`, plus `plot.svg` when `svg` is set. Returns the summary.
pub fn write_outputs(
    dir: &Path,
    records: &[TrialRecord],
    timings: Option<&[TrialTiming]>,
    svg: bool,
) -> Result<Vec<SummaryRow>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::Stats("no records to render".into()));
    }
    fs::create_dir_all(dir).map_err(|e| BenchError::Io(dir.to_path_buf(), e))?;
    write_trials_csv(records, create(&dir.join("trials.csv"))?)?;
    if let Some(t) = timings {
        write_timings_csv(t, create(&dir.join("timings.csv"))?)?;
    }
    let summary = summarize(records)?;
    write_summary_csv(&summary, create(&dir.join("summary.csv"))?)?;
    if svg {
        let path = dir.join("plot.svg");
        fs::write(&path, render_svg(&summary)).map_err(|e| BenchError::Io(path, e))?;
    }
    Ok(summary)
}
