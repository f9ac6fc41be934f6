//! Tab-delimited trajectory files with `#` header and footer lines.

use std::fmt::Write;

use qms_core::dynamics::{ClosureReport, Trajectory};

use crate::floatfmt::{parse_float, FloatFormat, ParseFloatError};

pub fn column_names(n: usize, monitors: &[String]) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=n).map(|i| format!("q{i}")));
    cols.extend((1..=n).map(|i| format!("p{i}")));
    cols.extend(monitors.iter().cloned());
    cols
}

/// Header lines (without `# `), the data rows, and footer lines.
pub struct TrajectoryFile<'a> {
    pub header: Vec<String>,
    pub trajectory: &'a Trajectory,
    pub footer: Vec<String>,
    pub floats: FloatFormat,
}

impl TrajectoryFile<'_> {
    pub fn render(&self) -> String {
        let tr = self.trajectory;
        let n = tr.states.first().map_or(0, |s| s.dim());
        let mut out = String::new();
        for h in &self.header {
            writeln!(out, "# {h}").unwrap();
        }
        writeln!(out, "# float_format = {}", self.floats).unwrap();
        writeln!(out, "# columns: {}", column_names(n, &tr.monitor_names).join("\t")).unwrap();
        for (k, state) in tr.states.iter().enumerate() {
            let row: Vec<String> = std::iter::once(tr.times[k])
                .chain(state.q().iter().copied())
                .chain(state.p().iter().copied())
                .chain(tr.monitor_values[k].iter().copied())
                .map(|v| self.floats.encode(v))
                .collect();
            writeln!(out, "{}", row.join("\t")).unwrap();
        }
        for (name, d) in tr.monitor_names.iter().zip(&tr.drift) {
            writeln!(out, "# drift {name} = {}", self.floats.encode(*d)).unwrap();
        }
        if !tr.drift.is_empty() {
            writeln!(out, "# max_drift = {}", self.floats.encode(tr.max_drift())).unwrap();
        }
        for f in &self.footer {
            writeln!(out, "# {f}").unwrap();
        }
        out
    }
}

pub fn closure_lines(rep: &ClosureReport, floats: FloatFormat) -> Vec<String> {
    vec![
        format!(
            "closure period_estimate = {}",
            rep.period_estimate.map_or("none".to_string(), |p| floats.encode(p))
        ),
        format!("closure closure_distance = {}", floats.encode(rep.closure_distance)),
        format!("closure is_closed = {}", rep.is_closed),
        format!("closure tolerance = {}", floats.encode(rep.tolerance)),
    ]
}

/// Column names and numeric rows of a trajectory file.
#[derive(Debug, PartialEq)]
pub struct ParsedTrajectory {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub comments: Vec<String>,
}

pub fn parse_trajectory(text: &str) -> Result<ParsedTrajectory, ParseFloatError> {
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix("# ") {
            if let Some(cols) = c.strip_prefix("columns: ") {
                columns = cols.split('\t').map(str::to_string).collect();
            } else {
                comments.push(c.to_string());
            }
        } else if !line.trim().is_empty() {
            rows.push(line.split('\t').map(parse_float).collect::<Result<Vec<_>, _>>()?);
        }
    }
    Ok(ParsedTrajectory { columns, rows, comments })
}
