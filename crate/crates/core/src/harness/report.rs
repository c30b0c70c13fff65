//! CSV, Markdown and SVG renderings of a [`ConvergenceReport`].

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::refinement::ConvergenceReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    Svg,
}

impl ReportFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(Self::Csv),
            Some("md") | Some("markdown") => Ok(Self::Markdown),
            Some("svg") => Ok(Self::Svg),
            _ => Err(Error::Config(format!(
                "cannot infer report format from `{}`",
                path.display()
            ))),
        }
    }
}

/// Five significant digits, e.g. `5.7626e-3`.
pub fn sci(x: f64) -> String {
    format!("{x:.4e}")
}

pub fn render(report: &ConvergenceReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::Config("cannot render an empty report".into()));
    }
    Ok(match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Markdown => to_markdown(report),
        ReportFormat::Svg => to_svg(report),
    })
}

pub fn emit_report(report: &ConvergenceReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn to_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from("resolution,error,order,cpu_seconds\n");
    for r in &report.rows {
        let order = r.order.map(|o| format!("{o:.4}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{:.4}", r.resolution, sci(r.error), order, r.seconds);
    }
    s
}

fn to_markdown(report: &ConvergenceReport) -> String {
    let sym = report.axis.symbol();
    let mut s = format!("**{}**\n\n| {sym} | E | Order | CPU(s) |\n|---:|---:|---:|---:|\n", report.label);
    for r in &report.rows {
        let order = r.order.map(|o| format!("{o:.4}")).unwrap_or_else(|| "--".into());
        let _ = writeln!(s, "| {} | {} | {} | {:.4} |", r.resolution, sci(r.error), order, r.seconds);
    }
    s
}

fn to_svg(report: &ConvergenceReport) -> String {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const PAD: f64 = 60.0;
    // x: log10 of the step 1/resolution, y: log10 of the error
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.error > 0.0)
        .map(|r| (-(r.resolution as f64).log10(), r.error.log10()))
        .collect();
    let slope = report.axis.reference_slope();
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        W / 2.0,
        escape(&report.label)
    );
    if pts.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let reference: Vec<(f64, f64)> = {
        let (x0, y0) = pts[0];
        let shift = 0.3;
        pts.iter().map(|&(x, _)| (x, y0 - shift + slope * (x - x0))).collect()
    };
    let all = pts.iter().chain(&reference);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if xmax - xmin < 1e-12 {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if ymax - ymin < 1e-12 {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let px = |x: f64| PAD + (x - xmin) / (xmax - xmin) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - ymin) / (ymax - ymin) * (H - 2.0 * PAD);
    let _ = writeln!(
        s,
        "<line x1=\"{PAD}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{}\" stroke=\"black\"/>",
        H - PAD,
        W - PAD,
        H - PAD,
        H - PAD
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">log10 step (1/{})</text>\n\
         <text x=\"16\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">log10 error</text>",
        W / 2.0,
        H - 20.0,
        report.axis.symbol(),
        H / 2.0,
        H / 2.0
    );
    let path = |p: &[(f64, f64)]| {
        p.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>",
        path(&reference)
    );
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>", path(&pts));
    for &(x, y) in &pts {
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>", px(x), py(y));
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"gray\">slope {slope}</text>",
        W - PAD - 60.0,
        PAD + 10.0
    );
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
