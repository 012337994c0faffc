use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::orchestrator::RunResult;

/// Statistics of one (problem, optimizer) pair over its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub optimizer: String,
    pub ave: f64,
    /// Sample standard deviation, 0 for a single trial.
    pub std: f64,
    pub best: f64,
    pub evals: usize,
}

impl SummaryRow {
    pub fn from_finals(problem: &str, optimizer: &str, finals: &[f64], evals: usize) -> Self {
        let n = finals.len() as f64;
        let ave = finals.iter().sum::<f64>() / n;
        let std = if finals.len() > 1 {
            (finals.iter().map(|v| (v - ave).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        SummaryRow {
            problem: problem.to_string(),
            optimizer: optimizer.to_string(),
            ave,
            std,
            best: finals.iter().copied().fold(f64::INFINITY, f64::min),
            evals,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

const COLUMNS: [&str; 6] = ["problem", "optimizer", "ave", "std", "best", "evals"];

/// `%g`-style formatting with `sig` significant digits.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", sig - 1, x);
        let (mant, e) = s.split_once('e').expect("scientific notation");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    }
}

pub fn emit_summary(rows: &[SummaryRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = COLUMNS.join(",");
            out.push('\n');
            for r in rows {
                let _ = writeln!(out, "{},{},{:?},{:?},{:?},{}", r.problem, r.optimizer, r.ave, r.std, r.best, r.evals);
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let cells: Vec<[String; 6]> = rows
                .iter()
                .map(|r| {
                    [
                        r.problem.clone(),
                        r.optimizer.clone(),
                        format_sig(r.ave, 6),
                        format_sig(r.std, 6),
                        format_sig(r.best, 6),
                        r.evals.to_string(),
                    ]
                })
                .collect();
            let mut widths = COLUMNS.map(str::len);
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let mut out = String::new();
            let line = |out: &mut String, row: &[&str]| {
                let parts: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .enumerate()
                    .map(|(i, (c, w))| if i < 2 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                    .collect();
                let _ = writeln!(out, "{}", parts.join("  ").trim_end());
            };
            line(&mut out, &COLUMNS);
            for row in &cells {
                line(&mut out, &row.iter().map(String::as_str).collect::<Vec<_>>());
            }
            out
        }
    }
}

/// `eval_index<TAB>best_so_far`, one line per evaluation, indices from 1.
pub fn emit_trace(result: &RunResult) -> String {
    let mut out = String::with_capacity(result.trace.len() * 24);
    for (i, v) in result.trace.iter().enumerate() {
        let _ = writeln!(out, "{}\t{:?}", i + 1, v);
    }
    out
}

/// `eval_index<TAB>u_1 .. u_d<TAB>value` for runs that kept their points.
pub fn emit_points(result: &RunResult) -> Option<String> {
    let mut out = String::new();
    for (i, r) in result.evaluations.iter().enumerate() {
        let p = r.point.as_ref()?;
        let _ = write!(out, "{}", i + 1);
        for u in p {
            let _ = write!(out, "\t{u:?}");
        }
        let _ = writeln!(out, "\t{:?}", r.value);
    }
    Some(out)
}
