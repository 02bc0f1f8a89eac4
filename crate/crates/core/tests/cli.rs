use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn semcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semcomm"))
        .args(args)
        .env_remove("SEMCOMM_SEED")
        .output()
        .unwrap()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {:?}", out))
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn identity_doc(n: usize) -> String {
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    serde_json::json!({"U": {"rows": n, "cols": n, "data": rows}, "C": "identity"}).to_string()
}

struct Csv {
    header: String,
    rows: Vec<Vec<f64>>,
}

fn read_csv(path: &Path) -> Csv {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    Csv { header, rows }
}

#[test]
fn check_identity_is_learnable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "id.json", &identity_doc(30));
    let out = semcomm(&["check", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["learnable"], true);
    assert_eq!(v["sigma_min"], 1.0);
    assert_eq!(v["rank"], 30);
    assert_eq!(v["deterministic_encoding"]["injective"], true);
}

#[test]
fn check_duplicated_column_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"U": {"rows": 3, "cols": 3, "data": [[0.6,0.6,0.1],[0.3,0.3,0.1],[0.1,0.1,0.8]]},
                  "C": {"rows": 3, "cols": 3, "data": [[0.9,0.05,0.05],[0.05,0.9,0.05],[0.05,0.05,0.9]]}}"#;
    let path = write(&dir, "dup.json", doc);
    let out = semcomm(&["check", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_stdout(&out);
    assert_eq!(v["learnable"], false);
    assert_eq!(v["rank"], 2);
    assert!(v["kappa"].is_null() || v["kappa"].as_f64().unwrap() > 1e10);
    let p1: Vec<f64> = serde_json::from_value(v["witness"]["p1"].clone()).unwrap();
    let p2: Vec<f64> = serde_json::from_value(v["witness"]["p2"].clone()).unwrap();
    // The first two meanings are encoded identically, so only their split may differ.
    assert!((p1[2] - p2[2]).abs() < 1e-9);
    assert!((p1[0] - p2[0]).abs() > 1e-6);
}

#[test]
fn check_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(&dir, "bad.json", "{\"U\": [1, 2");
    let not_stochastic = write(
        &dir,
        "ns.json",
        r#"{"U": {"rows": 2, "cols": 2, "data": [[0.5,0.2],[0.2,0.8]]}, "C": "identity"}"#,
    );
    for path in [s(&malformed), s(&not_stochastic), "/nonexistent/system.json"] {
        let out = semcomm(&["check", path]);
        assert_eq!(out.status.code(), Some(1), "{path}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(semcomm(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(semcomm(&["simulate", "--scheme", "awful"]).status.code(), Some(1));
    assert_eq!(
        semcomm(&["simulate", "--scheme", "well", "--system", "x.json"]).status.code(),
        Some(1)
    );
    let help = semcomm(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("distortion"));
    assert_eq!(semcomm(&["--version"]).status.code(), Some(0));
}

#[test]
fn simulate_well_conditioned_slope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("well.csv");
    let out = semcomm(&[
        "simulate", "--scheme", "well", "--n", "30", "--t-max", "10000", "--trials", "100", "--seed", "42", "--out",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json_stdout(&out);
    let slope = summary["error_slope"].as_f64().unwrap();
    assert!((-0.6..=-0.4).contains(&slope), "slope {slope}");

    let table = read_csv(&csv);
    assert_eq!(
        table.header,
        "t,mean_error,ci_low,ci_high,bound,mean_gap,gap_ci_low,gap_ci_high,gap_bound"
    );
    assert_eq!(table.rows.len(), 20);
    assert_eq!(table.rows[0][0], 10.0);
    assert_eq!(table.rows[19][0], 10_000.0);

    let fitted = semcomm(&["slope", "--in", s(&csv), "--field", "error"]);
    assert_eq!(fitted.status.code(), Some(0));
    let text = String::from_utf8(fitted.stdout).unwrap();
    let value: f64 = text.trim().parse().unwrap();
    assert!((-0.6..=-0.4).contains(&value));
    assert_eq!(text.trim().split('.').nth(1).unwrap().len(), 4);

    let meta: Value = serde_json::from_slice(&std::fs::read(dir.path().join("well.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["master_seed"], 42);
    assert_eq!(meta["rank"], 30);
    assert!(meta["rng"].as_str().unwrap().contains("ChaCha8"));
}

#[test]
fn ill_conditioned_error_dominates_well_conditioned() {
    let dir = tempfile::tempdir().unwrap();
    let run = |scheme: &str| {
        let csv = dir.path().join(format!("{scheme}.csv"));
        let out = semcomm(&["simulate", "--scheme", scheme, "--trials", "100", "--seed", "7", "--out", s(&csv)]);
        assert_eq!(out.status.code(), Some(0));
        read_csv(&csv).rows
    };
    let well = run("well");
    let ill = run("ill");
    for (w, i) in well.iter().zip(&ill) {
        assert_eq!(w[0], i[0]);
        assert!(i[1] > w[1], "T={}: ill {} vs well {}", w[0], i[1], w[1]);
    }
}

#[test]
fn single_trial_has_zero_width_interval() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let out = semcomm(&["simulate", "--trials", "1", "--t-max", "10", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let table = read_csv(&csv);
    assert_eq!(table.rows.len(), 1);
    let row = &table.rows[0];
    assert_eq!(row[0], 10.0);
    assert_eq!(row[1], row[2]);
    assert_eq!(row[1], row[3]);
    assert_eq!(row[5], row[6]);
    assert_eq!(row[5], row[7]);
}

#[test]
fn simulate_rejects_unlearnable_system() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "merged.json",
        r#"{"U": {"rows": 2, "cols": 2, "data": [[1,1],[0,0]]}, "C": "identity"}"#,
    );
    let out = semcomm(&["simulate", "--system", s(&path), "--out", s(&dir.path().join("x.csv"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn simulate_from_system_file_and_prior_file() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(
        &dir,
        "bsc.json",
        r#"{"U": {"rows": 2, "cols": 2, "data": [[1,0],[0,1]]},
            "C": {"rows": 2, "cols": 2, "data": [[0.9,0.1],[0.1,0.9]]}}"#,
    );
    let prior = write(&dir, "prior.csv", "0.7\n0.3\n");
    let csv = dir.path().join("bsc.csv");
    let out = semcomm(&[
        "simulate", "--system", s(&system), "--prior", s(&prior), "--trials", "200", "--t-max", "1000", "--grid", "5",
        "--out", s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json_stdout(&out);
    assert!((summary["sigma_min"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(summary["scheme"], "file");
    let rows = read_csv(&csv).rows;
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert!(row[1] <= row[4], "error {} above bound {}", row[1], row[4]);
    }
}

#[test]
fn bad_prior_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let prior = write(&dir, "prior.csv", "0.7\n0.7\n");
    let out = semcomm(&["simulate", "--n", "2", "--prior", s(&prior), "--out", s(&dir.path().join("x.csv"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn distortion_gap_decays_and_oracle_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gap.csv");
    let common = ["--scheme", "well", "--n", "30", "--t-max", "10000", "--grid", "7", "--trials", "100", "--seed", "5"];
    let mut args = vec!["distortion"];
    args.extend(common);
    args.extend(["--out", s(&csv)]);
    let out = semcomm(&args);
    assert_eq!(out.status.code(), Some(0));
    let summary = json_stdout(&out);
    let accuracy = summary["final_accuracy"].as_f64().unwrap();
    assert!(accuracy > 0.5 && accuracy <= 1.0);
    assert_eq!(summary["d_max"], 1.0);

    let rows = read_csv(&csv).rows;
    let at = |t: f64| rows.iter().find(|r| r[0] == t).unwrap()[5];
    assert!(at(100.0) >= 5.0 * at(10_000.0), "{} vs {}", at(100.0), at(10_000.0));
    for row in &rows {
        assert!(row[5] >= 0.0 && row[5] <= row[8]);
    }

    let oracle_csv = dir.path().join("oracle.csv");
    let mut args = vec!["distortion"];
    args.extend(common);
    args.extend(["--oracle-prior", "--out", s(&oracle_csv)]);
    assert_eq!(semcomm(&args).status.code(), Some(0));
    for row in read_csv(&oracle_csv).rows {
        assert!(row[5].abs() <= 1e-9);
    }
}

#[test]
fn distortion_file_is_used_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let scaled: String = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { "0" } else { "2.5" })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let d = write(&dir, "d.csv", &scaled);
    let csv = dir.path().join("g.csv");
    let out = semcomm(&["distortion", "--n", "4", "--distortion", s(&d), "--trials", "10", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_stdout(&out)["d_max"], 2.5);

    let negative = write(&dir, "neg.csv", "0,-1\n1,0\n");
    let out = semcomm(&["distortion", "--n", "2", "--distortion", s(&negative), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(1));
    let wrong_size = write(&dir, "big.csv", "0,1,1\n1,0,1\n1,1,0\n");
    let out = semcomm(&["distortion", "--n", "2", "--distortion", s(&wrong_size), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn slope_of_exact_inverse_root() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("t,mean_error,ci_low,ci_high,bound,mean_gap,gap_ci_low,gap_ci_high,gap_bound\n");
    for t in [10.0f64, 100.0, 1000.0, 10000.0] {
        let v = 1.0 / t.sqrt();
        text.push_str(&format!("{t},{v},{v},{v},{v},{v},{v},{v},{v}\n"));
    }
    let path = write(&dir, "exact.csv", &text);
    for field in ["error", "gap"] {
        let out = semcomm(&["slope", "--in", s(&path), "--field", field]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "-0.5000");
    }
}

#[test]
fn slope_needs_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "short.csv",
        "t,mean_error,ci_low,ci_high,bound,mean_gap,gap_ci_low,gap_ci_high,gap_bound\n10,1,1,1,1,1,1,1,1\n",
    );
    assert_eq!(semcomm(&["slope", "--in", s(&path)]).status.code(), Some(1));
    assert_eq!(semcomm(&["slope", "--in", "/nonexistent.csv"]).status.code(), Some(1));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let flag = dir.path().join("flag.csv");
    let env = dir.path().join("env.csv");
    let other = dir.path().join("other.csv");
    let base = ["simulate", "--n", "8", "--trials", "10", "--t-max", "500"];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--seed", "17", "--out", s(&flag)]);
    assert!(semcomm(&args).status.success());

    let run_env = |seed: &str, out: &Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_semcomm"))
            .args(base)
            .args(["--out", s(out)])
            .env("SEMCOMM_SEED", seed)
            .output()
            .unwrap();
        assert!(status.status.success());
    };
    run_env("17", &env);
    run_env("18", &other);
    assert_eq!(std::fs::read(&flag).unwrap(), std::fs::read(&env).unwrap());
    assert_ne!(std::fs::read(&flag).unwrap(), std::fs::read(&other).unwrap());
}

#[test]
fn projected_basis_changes_error_columns_only() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.csv");
    let projected = dir.path().join("projected.csv");
    let base = ["simulate", "--scheme", "ill", "--n", "10", "--trials", "20", "--t-max", "1000", "--seed", "3"];
    for (basis, out) in [("raw", &raw), ("projected", &projected)] {
        let mut args = base.to_vec();
        args.extend(["--error-basis", basis, "--out", s(out)]);
        assert!(semcomm(&args).status.success());
    }
    let (raw, projected) = (read_csv(&raw).rows, read_csv(&projected).rows);
    for (r, p) in raw.iter().zip(&projected) {
        assert!(p[1] <= r[1] + 1e-12);
        assert_eq!(r[4], p[4]);
        assert_eq!(r[5], p[5]);
    }
}
