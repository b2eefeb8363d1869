//! Output formatting, grids and the run manifest.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// CSV number: 17 significant digits, empty for non-finite or missing values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        String::new()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, num)
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `out` when given, else stdout.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

/// Parses "a:b:step" (inclusive linear) or "log:a:b:count".
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad grid spec '{spec}': expected a:b:step or log:a:b:count"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let f = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        ["log", a, b, k] => {
            let (a, b) = (f(a)?, f(b)?);
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            if !(a > 0.0 && b > a && k >= 2) {
                return Err(bad());
            }
            Ok(asymtail::numeric::logspace(a, b, k))
        }
        [a, b, step] => {
            let (a, b, step) = (f(a)?, f(b)?, f(step)?);
            if !(step > 0.0 && b >= a) {
                return Err(bad());
            }
            let k = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=k).map(|i| a + step * i as f64).collect())
        }
        _ => Err(bad()),
    }
}

/// One named pass/fail outcome for the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub checks: Vec<CheckOutcome>,
}
