use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use dirmono_core::{Counterexample, DirectionVerdict, MethodDisagreement, UnitPoint};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub verdicts: Vec<DirectionVerdict>,
    pub disagreements: Vec<MethodDisagreement>,
    /// Wall-clock time of the scan. The only nondeterministic field.
    pub timing_ms: f64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(DirectionVerdict::passed)
    }

    /// Method disagreements that are real defects, i.e. not under `D` and not
    /// from the conjectural pure rule.
    pub fn defects(&self) -> impl Iterator<Item = &MethodDisagreement> {
        self.disagreements
            .iter()
            .filter(|d| !d.conjectural && !d.by_duality)
    }
}

/// The slack shown for a verdict: the first route that recorded one.
fn headline_slack(v: &DirectionVerdict) -> Option<f64> {
    v.stats_for(v.method)
        .and_then(|s| s.max_slack)
        .or_else(|| v.stats.iter().find_map(|s| s.max_slack))
}

fn point(p: &UnitPoint) -> String {
    let parts: Vec<String> = p.coords().iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn text_counterexample(out: &mut String, cx: &Counterexample) {
    let _ = write!(
        out,
        "\n    {} witness: u_low={} u_high={}",
        cx.method,
        point(&cx.u_low),
        point(&cx.u_high)
    );
    if let Some(t) = &cx.target {
        let _ = write!(out, " target={}", point(t));
    }
    let _ = write!(
        out,
        "\n    lhs={:e} rhs={:e} violation={:e}",
        cx.lhs, cx.rhs, cx.violation
    );
}

fn render_text(report: &Report) -> String {
    let c = &report.config;
    let g = c.grid.resolution();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} grid={} method={} notion={} tol={:e}",
        c.spec, g, c.method, c.notion, c.tol
    );
    for v in &report.verdicts {
        let _ = write!(out, "{} {}@g={} {}", v.direction, v.outcome, g, v.method);
        match (&v.counterexample, headline_slack(v)) {
            (Some(cx), _) => {
                let _ = write!(out, " violation={:.3e}", cx.violation);
            }
            (None, Some(s)) => {
                let _ = write!(out, " slack={s:.3e}");
            }
            (None, None) => out.push_str(" slack=n/a"),
        }
        if v.conjectural {
            out.push_str(" [conjectural]");
        }
        if v.by_duality {
            out.push_str(" [by duality]");
        }
        if let Some(cx) = &v.counterexample {
            text_counterexample(&mut out, cx);
        }
        out.push('\n');
    }
    for d in &report.disagreements {
        let _ = writeln!(
            out,
            "! methods disagree on {}: inequality {} vs oracle {}{}",
            d.direction,
            d.inequality,
            d.oracle,
            if d.by_duality || d.conjectural {
                " (not a defect)"
            } else {
                ""
            }
        );
    }
    let passed = report.verdicts.iter().filter(|v| v.passed()).count();
    let _ = writeln!(
        out,
        "# {passed}/{} passed in {:.1} ms",
        report.verdicts.len(),
        report.timing_ms
    );
    out
}

#[derive(Serialize)]
struct CsvRow {
    direction: String,
    notion: String,
    outcome: String,
    method: String,
    grid: usize,
    pairs_tested: u64,
    max_slack: Option<f64>,
    min_slack: Option<f64>,
    conjectural: bool,
    by_duality: bool,
    witness_method: Option<String>,
    u_low: Option<String>,
    u_high: Option<String>,
    target: Option<String>,
    lhs: Option<f64>,
    rhs: Option<f64>,
    violation: Option<f64>,
}

fn csv_point(p: &UnitPoint) -> String {
    let parts: Vec<String> = p.coords().iter().map(|x| format!("{x}")).collect();
    parts.join(" ")
}

fn render_csv(report: &Report) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if report.verdicts.is_empty() {
        // Header only, so an empty run still yields a well-formed file.
        w.write_record([
            "direction",
            "notion",
            "outcome",
            "method",
            "grid",
            "pairs_tested",
            "max_slack",
            "min_slack",
            "conjectural",
            "by_duality",
            "witness_method",
            "u_low",
            "u_high",
            "target",
            "lhs",
            "rhs",
            "violation",
        ])?;
    }
    for v in &report.verdicts {
        let cx = v.counterexample.as_ref();
        w.serialize(CsvRow {
            direction: v.direction.tokens(),
            notion: v.notion.to_string(),
            outcome: v.outcome.to_string(),
            method: v.method.to_string(),
            grid: report.config.grid.resolution(),
            pairs_tested: v.stats.iter().map(|s| s.pairs_tested).sum(),
            max_slack: v.stats.iter().filter_map(|s| s.max_slack).reduce(f64::max),
            min_slack: v.stats.iter().filter_map(|s| s.min_slack).reduce(f64::min),
            conjectural: v.conjectural,
            by_duality: v.by_duality,
            witness_method: cx.map(|c| c.method.to_string()),
            u_low: cx.map(|c| csv_point(&c.u_low)),
            u_high: cx.map(|c| csv_point(&c.u_high)),
            target: cx.and_then(|c| c.target.as_ref()).map(csv_point),
            lhs: cx.map(|c| c.lhs),
            rhs: cx.map(|c| c.rhs),
            violation: cx.map(|c| c.violation),
        })?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn format_report(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(render_text(report)),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(report),
    }
}
