//! `qcaveat` — command-line front end for the scenario registry.
//!
//! Two subcommands:
//!
//! * `qcaveat list` prints every registered scenario with its parameters
//!   and defaults.
//! * `qcaveat run <config>` executes the scenario named in a config file
//!   and writes the result table as CSV or JSON to stdout or a file.
//!
//! Runs are deterministic: the output depends only on the scenario, its
//! parameters, and the seed. Worker-thread count comes from the
//! `QCAVEAT_THREADS` environment variable (default 1) and never changes
//! the numbers, only the wall-clock time.
//!
//! Exit codes: 0 success, 1 runtime failure inside a scenario, 2 bad
//! input (config syntax, unknown scenario or parameter, bad value),
//! 3 environment trouble (I/O, bad `QCAVEAT_THREADS`, violated
//! precondition).

mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcaveat_core::error::Error as CoreError;
use qcaveat_core::experiments::{
    find_scenario, run_experiment, scenarios, ExperimentSpec, ParamKind, ParamValue, ResultTable,
};

use config::OutputFormat;

const THREADS_VAR: &str = "QCAVEAT_THREADS";

#[derive(Parser)]
#[command(
    name = "qcaveat",
    version,
    about = "Deterministic numerical scenarios for phase-estimation and \
             linear-solver error analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run(RunArgs),
    /// List registered scenarios and their parameters.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Path to the run config file.
    config: PathBuf,
    /// Seed override (wins over the config file; default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Output format override (wins over the config file; default csv).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the table to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with an exit code and a short machine-greppable kind.
struct CliError {
    kind: &'static str,
    code: u8,
    message: String,
}

impl CliError {
    fn io(context: &str, err: std::io::Error) -> CliError {
        CliError {
            kind: "io",
            code: 3,
            message: format!("{context}: {err}"),
        }
    }

    fn env(message: String) -> CliError {
        CliError {
            kind: "env",
            code: 3,
            message,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> CliError {
        let (kind, code) = classify(&err);
        CliError {
            kind,
            code,
            message: err.to_string(),
        }
    }
}

/// Map library errors onto (kind, exit code). Input mistakes exit 2,
/// environment or sizing limits exit 3, anything else is a runtime
/// failure inside the scenario and exits 1.
fn classify(err: &CoreError) -> (&'static str, u8) {
    match err {
        CoreError::Parse(_) => ("config", 2),
        CoreError::UnknownScenario(_) => ("unknown-scenario", 2),
        CoreError::UnknownParameter { .. } => ("unknown-parameter", 2),
        CoreError::BadParameter { .. } => ("bad-parameter", 2),
        CoreError::Precondition(_) => ("precondition", 3),
        _ => ("runtime", 1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::List => list(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qcaveat: error[{}]: {}", err.kind, err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::io(&format!("reading {}", args.config.display()), e))?;
    let cfg = config::parse(&text)?;
    let scenario = find_scenario(&cfg.scenario)?;

    let mut params: BTreeMap<String, ParamValue> = BTreeMap::new();
    for (key, raw) in &cfg.parameters {
        let spec = scenario
            .params
            .iter()
            .find(|p| p.name == key)
            .ok_or_else(|| CoreError::UnknownParameter {
                scenario: scenario.name.to_string(),
                key: key.clone(),
            })?;
        let value = ParamValue::parse(spec.kind, raw).map_err(|e| CoreError::BadParameter {
            key: key.clone(),
            message: e.to_string(),
        })?;
        params.insert(key.clone(), value);
    }

    let spec = ExperimentSpec {
        scenario: cfg.scenario.clone(),
        params,
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        threads: threads_from_env()?,
    };
    let table = run_experiment(&spec)?;

    let format = args.format.or(cfg.format).unwrap_or(OutputFormat::Csv);
    let rendered = render(&table, format)?;

    match args.out.or(cfg.output) {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| CliError::io(&format!("writing {}", path.display()), e)),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| CliError::io("writing stdout", e)),
    }
}

fn render(table: &ResultTable, format: OutputFormat) -> Result<String, CliError> {
    let mut text = match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json()?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(text)
}

fn list() -> Result<(), CliError> {
    let mut out = String::new();
    for def in scenarios() {
        out.push_str(def.name);
        out.push('\n');
        out.push_str(&format!("  {}\n", def.summary));
        for p in &def.params {
            out.push_str(&format!(
                "    {} ({}, default {}): {}\n",
                p.name,
                kind_name(p.kind),
                p.default,
                p.help
            ));
        }
        out.push('\n');
    }
    std::io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| CliError::io("writing stdout", e))
}

fn kind_name(kind: ParamKind) -> &'static str {
    match kind {
        ParamKind::Float => "float",
        ParamKind::Int => "int",
        ParamKind::Floats => "float list",
        ParamKind::Ints => "int list",
    }
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(std::env::VarError::NotUnicode(_)) => Err(CliError::env(format!(
            "{THREADS_VAR} is not valid UTF-8"
        ))),
        Ok(raw) => {
            let parsed: Option<usize> = raw.trim().parse().ok();
            match parsed {
                Some(n) if n >= 1 => Ok(n),
                _ => Err(CliError::env(format!(
                    "{THREADS_VAR} must be a positive integer, got {raw:?}"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_documented_exit_codes() {
        let cases: Vec<(CoreError, &str, u8)> = vec![
            (CoreError::Parse("x".into()), "config", 2),
            (CoreError::UnknownScenario("x".into()), "unknown-scenario", 2),
            (
                CoreError::UnknownParameter {
                    scenario: "a".into(),
                    key: "b".into(),
                },
                "unknown-parameter",
                2,
            ),
            (
                CoreError::BadParameter {
                    key: "b".into(),
                    message: "m".into(),
                },
                "bad-parameter",
                2,
            ),
            (CoreError::Precondition("p".into()), "precondition", 3),
            (CoreError::ZeroMatrix, "runtime", 1),
        ];
        for (err, kind, code) in cases {
            assert_eq!(classify(&err), (kind, code), "{err:?}");
        }
    }

    #[test]
    fn every_registered_scenario_lists_without_panicking() {
        for def in scenarios() {
            assert!(!def.summary.is_empty());
            for p in &def.params {
                let _ = kind_name(p.kind);
                assert_eq!(p.default.kind(), p.kind);
            }
        }
    }
}
