//! CSV and SVG renderings of an [`ExperimentReport`].

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ExperimentReport;
use crate::error::{Error, Result};

/// Rows `kind,lambda,trial,iterations,converged`; adaptive rows leave
/// `lambda` empty.
pub fn write_csv<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    out.write_all(b"kind,lambda,trial,iterations,converged\n")?;
    for row in &report.per_lambda {
        let s = &row.summary;
        for (trial, (count, ok)) in s.iteration_counts.iter().zip(&s.converged).enumerate() {
            writeln!(out, "bbr,{},{trial},{count},{ok}", row.lambda)?;
        }
    }
    let a = &report.abbr;
    for (trial, (count, ok)) in a.iteration_counts.iter().zip(&a.converged).enumerate() {
        writeln!(out, "abbr,,{trial},{count},{ok}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_csv(report, BufWriter::new(File::create(path)?))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

/// Median constant-λ iteration count against λ on a log axis, with the
/// adaptive median as a dashed horizontal line.
pub fn write_plot<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    let points: Vec<(f64, f64)> = report
        .per_lambda
        .iter()
        .filter(|r| !r.summary.iteration_counts.is_empty())
        .map(|r| (r.lambda, r.summary.median))
        .collect();
    if points.is_empty() || report.abbr.iteration_counts.is_empty() {
        return Err(Error::Validation("report has no trials to plot".into()));
    }
    let abbr = report.abbr.median;

    // Counts of zero are drawn on the bottom edge.
    let log = |c: f64| c.max(1.0).log10();
    let (mut lo, mut hi) = points
        .iter()
        .map(|p| log(p.1))
        .chain(std::iter::once(log(abbr)))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    lo = lo.floor();
    hi = hi.ceil().max(lo + 1.0);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |lambda: f64| LEFT + lambda * plot_w;
    let py = |count: f64| TOP + (hi - log(count)) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="28" text-anchor="middle" font-size="15">Iterations to reach the stopping threshold</text>"#,
        WIDTH / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
    );

    for i in 0..=5 {
        let lambda = i as f64 / 5.0;
        let x = px(lambda);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{lambda:.1}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
    }
    let mut decade = lo as i32;
    while decade <= hi as i32 {
        let y = py(10f64.powi(decade));
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#333"/><line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{decade}</text>"##,
            LEFT - 5.0,
            LEFT + plot_w,
            LEFT - 8.0,
            y + 4.0
        );
        decade += 1;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">λ (constant relaxation)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">median iterations</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let path: Vec<String> = points
        .iter()
        .map(|&(l, c)| format!("{:.2},{:.2}", px(l), py(c)))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f5fa8" stroke-width="2" points="{}"/>"##,
        path.join(" ")
    );
    for &(l, c) in &points {
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="#1f5fa8"/>"##,
            px(l),
            py(c)
        );
    }
    let ya = py(abbr);
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{ya:.2}" x2="{:.2}" y2="{ya:.2}" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 4"/>"##,
        LEFT + plot_w
    );
    let lx = LEFT + plot_w - 190.0;
    let _ = writeln!(
        svg,
        r##"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#1f5fa8" stroke-width="2"/><text x="{:.1}" y="{:.1}">BBR (median)</text>"##,
        TOP + 18.0,
        lx + 30.0,
        TOP + 18.0,
        lx + 38.0,
        TOP + 22.0
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 4"/><text x="{:.1}" y="{:.1}">aBBR (median {abbr})</text>"##,
        TOP + 38.0,
        lx + 30.0,
        TOP + 38.0,
        lx + 38.0,
        TOP + 42.0
    );
    svg.push_str("</svg>\n");
    out.write_all(svg.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn emit_plot(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_plot(report, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{ExperimentConfig, LambdaSummary, TrialSummary};
    use crate::operators::OperatorSpec;

    fn summary(outcomes: Vec<(usize, bool)>) -> TrialSummary {
        TrialSummary::from_outcomes(outcomes)
    }

    fn sample_report() -> ExperimentReport {
        ExperimentReport {
            operator: OperatorSpec::diagonal(&[0.7, 0.2]),
            per_lambda: vec![
                LambdaSummary {
                    lambda: 0.000001,
                    summary: summary(vec![(1_000_000, false)]),
                },
                LambdaSummary {
                    lambda: 0.5,
                    summary: summary(vec![(86, true)]),
                },
            ],
            abbr: summary(vec![(40, true)]),
            lambda_opt_empirical: 0.5,
            config_echo: ExperimentConfig::default(),
        }
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_csv(&sample_report(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "kind,lambda,trial,iterations,converged\n\
             bbr,0.000001,0,1000000,false\n\
             bbr,0.5,0,86,true\n\
             abbr,,0,40,true\n"
        );
    }

    #[test]
    fn plot_is_svg() {
        let mut buf = Vec::new();
        write_plot(&sample_report(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert!(text.contains("<polyline"));
        assert!(text.contains("stroke-dasharray"));
        assert!(text.contains("median iterations"));
    }

    #[test]
    fn empty_report_rejected() {
        let mut report = sample_report();
        report.per_lambda.clear();
        assert!(matches!(write_plot(&report, Vec::new()), Err(Error::Validation(_))));
    }
}
