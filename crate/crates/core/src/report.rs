//! Decay-exponent fits, verdict rows and diagnostic plots.
//!
//! Every verification in the crate reduces to one of two shapes: a measured
//! quantity must stay below an envelope (bounded ratio), or it must decay in a
//! parameter at least as fast as a target power (fitted log-log slope). Both
//! are recorded as [`FitSeries`] inside a [`BoundFitReport`]; the CSV row
//! format of [`VerdictRow`] is the normative output of the command-line tool.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Slack added to every target decay exponent (finite-parameter preasymptotics).
pub const DEFAULT_SLACK: f64 = 0.2;

/// Ordinary least squares of `ln y` against `ln x`; returns `(slope, constant)`
/// with `y ≈ constant · x^slope`. Points with non-positive coordinates are
/// skipped; fewer than two usable points give `NaN`.
pub fn fit_log_log(x: &[f64], y: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    (slope, (my - slope * mx).exp())
}

/// Log-log fit restricted to the upper half of the parameter range (the
/// `⌈n/2⌉` largest parameters, at least two points).
pub fn fit_top_half(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let keep = x.len().div_ceil(2).max(2).min(x.len());
    let tail = &idx[x.len() - keep..];
    let xs: Vec<f64> = tail.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = tail.iter().map(|&i| y[i]).collect();
    fit_log_log(&xs, &ys)
}

/// How a series is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Criterion {
    /// Fitted slope must be ≤ `target + slack`.
    Slope { target: f64, slack: f64 },
    /// Every value must be ≤ `bound`.
    Bounded { bound: f64 },
    /// Every value must be ≥ `bound`.
    AtLeast { bound: f64 },
}

/// One measured curve and its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSeries {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub constant: f64,
    pub criterion: Criterion,
    pub pass: bool,
}

impl FitSeries {
    /// Series judged by the top-half log-log slope.
    pub fn slope(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>, target: f64, slack: f64) -> Self {
        let (slope, constant) = fit_top_half(&grid, &values);
        let pass = slope.is_finite() && slope <= target + slack;
        FitSeries { label: label.into(), grid, values, slope, constant, criterion: Criterion::Slope { target, slack }, pass }
    }

    /// Series judged by a uniform upper bound; the fit is descriptive only.
    pub fn bounded(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>, bound: f64) -> Self {
        let (slope, constant) = fit_log_log(&grid, &values);
        let pass = values.iter().all(|v| v.is_finite() && *v <= bound);
        FitSeries { label: label.into(), grid, values, slope, constant, criterion: Criterion::Bounded { bound }, pass }
    }

    /// Series judged by a uniform lower bound.
    pub fn at_least(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>, bound: f64) -> Self {
        let pass = values.iter().all(|v| v.is_finite() && *v >= bound);
        FitSeries {
            label: label.into(),
            grid,
            values,
            slope: f64::NAN,
            constant: f64::NAN,
            criterion: Criterion::AtLeast { bound },
            pass,
        }
    }

    /// Largest measured value.
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest measured value.
    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// A collection of judged series plus failures that prevented measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundFitReport {
    pub name: String,
    pub series: Vec<FitSeries>,
    /// Grid points whose evaluation failed, with the error message.
    pub failures: Vec<String>,
    pub runtime_s: f64,
}

impl BoundFitReport {
    pub fn new(name: impl Into<String>) -> Self {
        BoundFitReport { name: name.into(), series: Vec::new(), failures: Vec::new(), runtime_s: 0.0 }
    }

    /// Pass iff every series passes and nothing failed to evaluate.
    pub fn pass(&self) -> bool {
        !self.series.is_empty() && self.failures.is_empty() && self.series.iter().all(|s| s.pass)
    }

    /// One CSV verdict row per series (timing excluded, so rows are
    /// reproducible byte for byte).
    pub fn rows(&self) -> Vec<VerdictRow> {
        self.series
            .iter()
            .map(|s| {
                let (lhs, rhs) = match s.criterion {
                    Criterion::Slope { target, slack } => (s.slope, target + slack),
                    Criterion::Bounded { bound } => (s.max(), bound),
                    Criterion::AtLeast { bound } => (s.min(), bound),
                };
                VerdictRow {
                    check_id: format!("{}/{}", self.name, s.label),
                    params: format!("n={};grid={:.6e}..{:.6e}", s.grid.len(), first(&s.grid), last(&s.grid)),
                    value_lhs: lhs,
                    value_rhs: rhs,
                    rel_discrepancy: rel(lhs, rhs),
                    tail_bound: 0.0,
                    verdict: s.pass,
                }
            })
            .collect()
    }
}

fn first(v: &[f64]) -> f64 {
    v.first().copied().unwrap_or(f64::NAN)
}

fn last(v: &[f64]) -> f64 {
    v.last().copied().unwrap_or(f64::NAN)
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// The normative CSV row `{check_id, params, value_lhs, value_rhs,
/// rel_discrepancy, tail_bound, verdict}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub check_id: String,
    pub params: String,
    pub value_lhs: f64,
    pub value_rhs: f64,
    pub rel_discrepancy: f64,
    pub tail_bound: f64,
    pub verdict: bool,
}

impl VerdictRow {
    pub const HEADER: &'static str = "check_id,params,value_lhs,value_rhs,rel_discrepancy,tail_bound,verdict";

    /// Comparison row for an identity `lhs = rhs` accepted within `tol`
    /// relative (plus the tail bound, if any).
    pub fn identity(check_id: impl Into<String>, params: impl Into<String>, lhs: f64, rhs: f64, tail_bound: f64, tol: f64) -> Self {
        let d = rel(lhs, rhs);
        let scale = lhs.abs().max(rhs.abs());
        VerdictRow {
            check_id: check_id.into(),
            params: params.into(),
            value_lhs: lhs,
            value_rhs: rhs,
            rel_discrepancy: d,
            tail_bound,
            verdict: (lhs - rhs).abs() <= tol * scale + tail_bound,
        }
    }

    /// CSV line; floats use a fixed 12-significant-digit exponent format so
    /// reruns are byte-identical.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{:.6e},{:.6e},{}",
            csv_escape(&self.check_id),
            csv_escape(&self.params),
            self.value_lhs,
            self.value_rhs,
            self.rel_discrepancy,
            self.tail_bound,
            if self.verdict { "pass" } else { "fail" }
        )
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Full CSV document (header plus rows, sorted by `check_id` then `params`).
pub fn to_csv(rows: &[VerdictRow]) -> String {
    let mut sorted: Vec<&VerdictRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.check_id, &a.params).cmp(&(&b.check_id, &b.params)));
    let mut out = String::from(VerdictRow::HEADER);
    out.push('\n');
    for r in sorted {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

/// Log-log SVG plot of all series of a report (diagnostic only).
pub fn to_svg(report: &BoundFitReport) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 50.0;
    let pts: Vec<(f64, f64)> = report
        .series
        .iter()
        .flat_map(|s| s.grid.iter().zip(&s.values).map(|(x, y)| (*x, *y)))
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(svg, r#"<text x="{M}" y="20">{}</text>"#, xml_escape(&report.name));
    if pts.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let _ = writeln!(
        svg,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(svg, r#"<text x="{M}" y="{}">log10 x: {x0:.2} .. {x1:.2}; log10 y: {y0:.2} .. {y1:.2}</text>"#, H - 15.0);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (k, s) in report.series.iter().enumerate() {
        let color = colors[k % colors.len()];
        let line: Vec<String> = s
            .grid
            .iter()
            .zip(&s.values)
            .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", sx(x.log10()), sy(y.log10())))
            .collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" points="{}"/>"#, line.join(" "));
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{} (slope {:.3})</text>"#,
            W - M - 200.0,
            M + 15.0 + 14.0 * k as f64,
            xml_escape(&s.label),
            s.slope
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
