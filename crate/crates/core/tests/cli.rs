use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasiweyl"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_config(cmd: &str, config: &str, extra: &[&str]) -> Output {
    let path = configs().join(config);
    let mut args = vec![cmd, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(out.stdout.as_slice()).records().map(Result::unwrap).collect()
}

#[test]
fn gen_matrix_f21_matches_golden() {
    let out = run_config("gen-matrix", "gen_f21.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let json_part = &text[..text.find("\nQ = ").unwrap()];
    let doc: serde_json::Value = serde_json::from_str(json_part).unwrap();
    let f = &doc["F"];
    assert_eq!(f[2][0], "-s0*s2 + s1");
    assert_eq!(f[2][1], "2*s0 - s2^2");
    assert_eq!(f[3][0], "s0^2");
    assert_eq!(doc["structure"]["passes"], true);
    assert!(text.contains("\\sigma_{0}^{2}"));
}

#[test]
fn gen_matrix_second_order_regular() {
    let out = run(&["gen-matrix", "--n", "2", "--orders", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["F"], serde_json::json!([["0", "1"], ["-s0", "0"]]));
}

#[test]
fn malformed_orders_exit_2() {
    let out = run(&["gen-matrix", "--n", "4", "--orders", "3,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "bad.json", r#"{"n": 4, "orders": [0, 0]}"#);
    assert_eq!(run(&["gen-matrix", "--config", &cfg]).status.code(), Some(2));
    let cfg = write_config(&dir, "junk.json", r#"{"n": 4, "orders": [0, 0, 0], "extra": 1}"#);
    assert_eq!(run(&["gen-matrix", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn sweep_free_half_line_is_minus_one_over_rho() {
    let out = run_config("weyl-sweep", "sweep_halfline_free.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&out) {
        let rho: f64 = row[3].parse().unwrap();
        let m: f64 = row[5].parse().unwrap();
        assert!((m + 1.0 / rho).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn sweep_free_finite_is_coth() {
    let out = run_config("weyl-sweep", "sweep_finite_free.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    let m: f64 = rows[0][5].parse().unwrap();
    assert!((m + 1.0 / 1.0f64.tanh()).abs() < 1e-9);
    let m: f64 = rows[1][5].parse().unwrap();
    assert!(m.abs() < 1e-9);
}

#[test]
fn empty_grid_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(configs().join("sweep_halfline_free.json")).unwrap();
    let body = base.replace(r#""ray": { "phi": 0.0, "magnitudes": [1, 4, 9, 16] }"#, r#""list": []"#);
    assert_ne!(body, base);
    let cfg = write_config(&dir, "empty.json", &body);
    assert_eq!(run(&["weyl-sweep", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn sweep_output_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let cfg = configs().join("sweep_finite_free.json");
    for (out, jobs) in [(&a, "1"), (&b, "4")] {
        let status = bin()
            .args(["weyl-sweep", "--config", cfg.to_str().unwrap(), "--jobs", jobs, "--steps", "2000"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn verify_seeds_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "v.json", r#"{"ns": [2, 3, 4, 5, 6], "seeds": 100, "max_degree": 6}"#);
    let out = run(&["verify", "--config", &cfg, "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_rows(&out).len(), 500);
}

#[test]
fn transform_check_on_bump_pair() {
    let out = run_config("transform", "transform_n2_bump.json", &["--check"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["check"]["passed"], true);
    assert!(doc["check"]["report"]["max_deviation"].as_f64().unwrap() <= 1e-4);
    assert_eq!(doc["spec"]["coeffs"]["orders"], serde_json::json!([1]));
}

#[test]
fn transform_output_roundtrips_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("transform", "transform_n2_bump.json", &[]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let back = serde_json::json!({
        "problem": doc["spec"],
        "correspondence": "n2",
        "direction": "lower_order",
    });
    let cfg = write_config(&dir, "back.json", &back.to_string());
    let out = run(&["transform", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["spec"]["coeffs"]["orders"], serde_json::json!([0]));
    assert_eq!(doc["spec"]["U"]["lower"][1][0], serde_json::json!([0.0, 0.0]));
}

#[test]
fn asym_probe_errors_shrink() {
    let out = run_config("asym-probe", "asym_n2_bump.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let errs: Vec<f64> = csv_rows(&out).iter().map(|r| r[5].parse().unwrap()).collect();
    assert_eq!(errs.len(), 4);
    assert!(errs[3] < 0.05 && errs[3] < errs[0]);
}

#[test]
fn truncation_override_is_applied() {
    let out = run_config("weyl-sweep", "sweep_halfline_free.json", &["--truncation-X", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_config("weyl-sweep", "sweep_halfline_free.json", &["--truncation-X", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}
