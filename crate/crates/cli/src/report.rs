use std::fmt::{self, Write as _};
use std::io::Write as _;

use psdblock::Error;
use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Library(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    /// Unmet mathematical hypotheses on well-formed input are a negative
    /// verdict; malformed input is a usage error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Library(e) if e.is_numerical() => 3,
            Failure::Library(
                Error::NotPsd { .. }
                | Error::NotPd { .. }
                | Error::BNotInvertible
                | Error::CommutationViolated(_)
                | Error::PreconditionIXNotDefinite
                | Error::PreconditionViolated { .. }
                | Error::LMaxExceeded { .. }
                | Error::TMaxExceeded { .. },
            ) => 1,
            Failure::Library(_) => 2,
        }
    }
}

/// A computed result in all three output formats.
pub struct Report {
    pub verdict_holds: bool,
    pub json: serde_json::Value,
    pub text: String,
    pub csv: String,
}

impl Report {
    pub fn new(verdict_holds: bool, value: &impl Serialize, text: String, csv: String) -> Result<Self, Failure> {
        let json = serde_json::to_value(value).map_err(|e| Failure::Usage(format!("cannot serialize report: {e}")))?;
        Ok(Report { verdict_holds, json, text, csv })
    }

    pub fn emit(&self, config: &RunConfig) -> Result<(), Failure> {
        let body = match config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        };
        match &config.out {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| Failure::Usage(format!("--out: cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
            }
        }
    }
}

pub fn fmt_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `name,value` rows for scalar summaries.
pub fn csv_pairs(rows: &[(&str, String)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

/// Aligned `name: value` lines.
pub fn text_pairs(title: &str, rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = format!("{title}\n");
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
    out
}
