//! End-to-end tests that drive the compiled `qcaveat` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

/// Fresh command for the built binary, isolated from ambient env vars
/// that would change scheduling.
fn qcaveat() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qcaveat"));
    cmd.env_remove("QCAVEAT_THREADS");
    cmd
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write config");
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

/// Extract one named column from CSV text as raw (unparsed) cells.
fn csv_column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("column {name:?} not in header {header:?}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn t_sweep_run_prints_exact_quartic_cost_ratios() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.conf", "scenario = t_sweep\n");
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let csv = stdout_of(&out);
    // Halving the evolution time scale quadruples the condition-style
    // cost factor, and the default factors 1, 0.5, 0.25 are powers of
    // two, so the printed ratios are bit-exact small integers.
    assert_eq!(csv_column(&csv, "cost_ratio"), vec!["1", "4", "16"]);
    assert_eq!(csv_column(&csv, "factor"), vec!["1", "0.5", "0.25"]);
}

#[test]
fn parameters_override_scenario_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.conf",
        "scenario = t_sweep\n[parameters]\nfactors = 1,0.125\n",
    );
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert_eq!(csv_column(&stdout_of(&out), "cost_ratio"), vec!["1", "64"]);
}

#[test]
fn unknown_scenario_exits_2_with_a_tagged_message() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.conf", "scenario = no_such_sweep\n");
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("error[unknown-scenario]"), "{err}");
    assert!(err.contains("no_such_sweep"), "{err}");
}

#[test]
fn unknown_parameter_exits_2_and_names_the_key() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.conf",
        "scenario = mu_sweep\n[parameters]\nwibble = 3\n",
    );
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("error[unknown-parameter]"), "{err}");
    assert!(err.contains("wibble"), "{err}");
}

#[test]
fn unparseable_parameter_value_exits_2_as_bad_parameter() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.conf",
        "scenario = mu_sweep\n[parameters]\nmu_values = small,large\n",
    );
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("error[bad-parameter]"), "{err}");
    assert!(err.contains("mu_values"), "{err}");
}

#[test]
fn malformed_config_exits_2_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.conf", "scenario = mu_sweep\nseed = soon\n");
    let out = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("error[config]"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_config_file_exits_3_as_io() {
    let out = qcaveat().arg("run").arg("/definitely/not/here.conf").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("error[io]"), "{}", stderr_of(&out));
}

#[test]
fn bad_threads_variable_exits_3_as_env() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.conf", "scenario = mu_sweep\n");
    for bad in ["abc", "0", "-2"] {
        let out = qcaveat()
            .env("QCAVEAT_THREADS", bad)
            .arg("run")
            .arg(&cfg)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(3), "QCAVEAT_THREADS={bad}");
        assert!(stderr_of(&out).contains("error[env]"), "{}", stderr_of(&out));
    }
}

#[test]
fn reruns_and_thread_counts_produce_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.conf",
        "scenario = trace_scaling\nseed = 4\n[parameters]\n\
         m_values = 16,64\ntrials = 8\nshots = 64\n",
    );
    let first = qcaveat().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    let again = qcaveat().arg("run").arg(&cfg).output().unwrap();
    let threaded = qcaveat()
        .env("QCAVEAT_THREADS", "3")
        .arg("run")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(threaded.status.code(), Some(0));
    assert_eq!(first.stdout, again.stdout, "rerun changed the output");
    assert_eq!(first.stdout, threaded.stdout, "thread count changed the output");
}

#[test]
fn seed_flag_wins_over_the_config_seed() {
    let dir = TempDir::new().unwrap();
    let params = "[parameters]\nm_values = 16\ntrials = 4\nshots = 32\n";
    let cfg5 = write_config(
        dir.path(),
        "seed5.conf",
        &format!("scenario = trace_scaling\nseed = 5\n{params}"),
    );
    let cfg9 = write_config(
        dir.path(),
        "seed9.conf",
        &format!("scenario = trace_scaling\nseed = 9\n{params}"),
    );
    let overridden = qcaveat().arg("run").arg(&cfg5).arg("--seed").arg("9").output().unwrap();
    let plain9 = qcaveat().arg("run").arg(&cfg9).output().unwrap();
    let plain5 = qcaveat().arg("run").arg(&cfg5).output().unwrap();
    assert_eq!(overridden.status.code(), Some(0), "stderr: {}", stderr_of(&overridden));
    assert_eq!(
        overridden.stdout, plain9.stdout,
        "--seed 9 should reproduce a config with seed 9"
    );
    assert_ne!(
        overridden.stdout, plain5.stdout,
        "--seed 9 should differ from the config's seed 5"
    );
}

#[test]
fn json_output_lands_in_the_requested_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.conf", "scenario = t_sweep\n");
    let out_path = dir.path().join("table.json");
    let out = qcaveat()
        .arg("run")
        .arg(&cfg)
        .arg("--format")
        .arg("json")
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).is_empty(), "file output should leave stdout empty");
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("\"columns\""), "{text}");
    assert!(text.contains("cost_ratio"), "{text}");
    assert!(text.ends_with('\n'));
}

#[test]
fn list_names_every_registered_scenario() {
    let out = qcaveat().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for name in [
        "classification_z_scaling",
        "counting_relative_error",
        "grid_refinement",
        "lowrank_time_scale",
        "mu_sweep",
        "norm_amplification",
        "t_sweep",
        "trace_scaling",
    ] {
        assert!(text.contains(name), "list output missing {name}: {text}");
    }
    assert!(text.contains("default"), "list output should show defaults");
}
