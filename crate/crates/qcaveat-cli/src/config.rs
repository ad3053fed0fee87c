//! Strict line-based run-configuration parser.
//!
//! A run file has top-level `key = value` lines followed by an optional
//! `[parameters]` section whose entries override scenario defaults:
//!
//! ```text
//! # which sweep to run
//! scenario = t_sweep
//! seed = 7
//! format = csv
//!
//! [parameters]
//! factors = 1,0.5,0.25
//! ```
//!
//! Full-line `#` comments and blank lines are skipped. Inline comments
//! are not supported. Every line must parse; duplicate keys, unknown
//! top-level keys, and unknown sections are errors.

use std::path::PathBuf;

use qcaveat_core::error::{Error, Result};

/// Output rendering selected by the `format` key or `--format` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn parse(text: &str) -> Option<OutputFormat> {
        match text {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

/// Parsed run file. Parameter values stay as text here; they are typed
/// against the scenario's declared kinds once the scenario is resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub parameters: Vec<(String, String)>,
}

pub fn parse(text: &str) -> Result<RunConfig> {
    let mut scenario: Option<String> = None;
    let mut seed: Option<u64> = None;
    let mut output: Option<PathBuf> = None;
    let mut format: Option<OutputFormat> = None;
    let mut parameters: Vec<(String, String)> = Vec::new();
    let mut in_parameters = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            if line == "[parameters]" {
                if in_parameters {
                    return Err(Error::Parse(format!(
                        "line {lineno}: duplicate [parameters] section"
                    )));
                }
                in_parameters = true;
                continue;
            }
            return Err(Error::Parse(format!(
                "line {lineno}: unknown section {line:?} (only [parameters] is supported)"
            )));
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!(
                "line {lineno}: expected `key = value`, got {line:?}"
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {lineno}: empty key")));
        }
        if in_parameters {
            if parameters.iter().any(|(k, _)| k == key) {
                return Err(Error::Parse(format!(
                    "line {lineno}: duplicate parameter {key:?}"
                )));
            }
            parameters.push((key.to_string(), value.to_string()));
            continue;
        }
        match key {
            "scenario" => {
                if scenario.is_some() {
                    return Err(Error::Parse(format!("line {lineno}: duplicate scenario")));
                }
                if value.is_empty() {
                    return Err(Error::Parse(format!("line {lineno}: empty scenario name")));
                }
                scenario = Some(value.to_string());
            }
            "seed" => {
                if seed.is_some() {
                    return Err(Error::Parse(format!("line {lineno}: duplicate seed")));
                }
                seed = Some(value.parse().map_err(|e| {
                    Error::Parse(format!("line {lineno}: bad seed {value:?}: {e}"))
                })?);
            }
            "output" => {
                if output.is_some() {
                    return Err(Error::Parse(format!("line {lineno}: duplicate output")));
                }
                if value.is_empty() {
                    return Err(Error::Parse(format!("line {lineno}: empty output path")));
                }
                output = Some(PathBuf::from(value));
            }
            "format" => {
                if format.is_some() {
                    return Err(Error::Parse(format!("line {lineno}: duplicate format")));
                }
                format = Some(OutputFormat::parse(value).ok_or_else(|| {
                    Error::Parse(format!(
                        "line {lineno}: bad format {value:?} (expected csv or json)"
                    ))
                })?);
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {lineno}: unknown key {key:?} (expected scenario, seed, output, \
                     or format)"
                )));
            }
        }
    }

    let scenario =
        scenario.ok_or_else(|| Error::Parse("config needs a `scenario = <name>` line".into()))?;
    Ok(RunConfig {
        scenario,
        seed,
        output,
        format,
        parameters,
    })
}
