//! Report envelope and deterministic output helpers. Timing goes to stderr
//! so that repeated runs with the same config and seed produce byte-identical
//! files.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub fn verdict(name: &str, pass: bool, detail: impl Into<String>) -> VerdictLine {
    VerdictLine {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

/// Common envelope for every subcommand that emits a JSON report.
#[derive(Debug, Serialize)]
pub struct RunReport<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: C,
    pub results: R,
    pub verdicts: Vec<VerdictLine>,
    pub all_pass: bool,
}

pub fn all_pass(verdicts: &[VerdictLine]) -> bool {
    verdicts.iter().all(|v| v.pass)
}

/// Pretty JSON with a trailing newline, to a file or stdout.
pub fn emit_json(value: &impl Serialize, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Module(format!("report serialization: {e}")))?;
    text.push('\n');
    emit_text(&text, path)
}

pub fn emit_text(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(p, text)?;
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
