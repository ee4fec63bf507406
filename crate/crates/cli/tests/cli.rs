use homflow_cli::output::{fmt_f64, sample_row, CSV_HEADER};
use homflow_core::{integrate, Case, IntegratorOptions, MetricParams};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn homflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const UNIT_RUN: &str = r#"
case = "so3r3"

[initial]
alpha = 1.0
beta = 1.0
gamma = 1.0
"#;

const SLICE_RUN: &str = r#"
case = "sl2c"

[initial]
alpha = 1.0
beta = 1.0
gamma = 1.0
mu = 0.2
nu = 0.2

[integrator]
sample_stride = 0.002
"#;

fn run(dir: &Path, cfg: &str, tag: &str) -> (Output, PathBuf, PathBuf) {
    let c = write(dir, &format!("{tag}.toml"), cfg);
    let csv = dir.join(format!("{tag}.csv"));
    let json = dir.join(format!("{tag}.json"));
    let out = homflow(&[
        "run",
        "--config",
        c.to_str().unwrap(),
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
    ]);
    (out, csv, json)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_exact_solution() {
    let dir = TempDir::new().unwrap();
    let (out, csv, js) = run(dir.path(), UNIT_RUN, "unit");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&js);
    assert_eq!(v["termination_kind"], "extinct");
    let t = v["extinction_time"].as_f64().unwrap();
    assert!((t - 0.5).abs() <= 1e-6, "{t}");
    assert_eq!(v["t_g"].as_f64(), Some(0.0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
}

#[test]
fn csv_round_trips_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let (out, csv, _) = run(dir.path(), SLICE_RUN, "slice");
    assert!(out.status.success());

    let m0 = MetricParams::new(Case::Sl2C, 1.0, 1.0, 1.0, 0.2, 0.2).unwrap();
    let opts = IntegratorOptions { sample_stride: 0.002, ..Default::default() };
    let traj = integrate(&m0, &opts).unwrap();

    let mut reader = csv::Reader::from_path(csv).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), traj.samples.len());
    for (row, s) in rows.iter().zip(&traj.samples) {
        for (field, expect) in row.iter().zip(sample_row(s)) {
            let parsed: f64 = field.parse().unwrap();
            assert_eq!(parsed.to_bits(), expect.to_bits(), "{field}");
            assert_eq!(fmt_f64(parsed), field);
        }
    }
}

#[test]
fn run_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (_, csv_a, js_a) = run(dir.path(), SLICE_RUN, "a");
    let (_, csv_b, js_b) = run(dir.path(), SLICE_RUN, "b");
    assert_eq!(std::fs::read(csv_a).unwrap(), std::fs::read(csv_b).unwrap());
    assert_eq!(std::fs::read(js_a).unwrap(), std::fs::read(js_b).unwrap());
}

#[test]
fn zero_horizon_gives_one_row() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{UNIT_RUN}\n[integrator]\nhorizon = 0.0\n");
    let (out, csv, js) = run(dir.path(), &cfg, "zero");
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 2);
    assert_eq!(json(&js)["termination_kind"], "horizon_reached");
}

#[test]
fn malformed_config_exits_one_without_output() {
    let dir = TempDir::new().unwrap();
    for (tag, cfg) in [
        ("syntax", "case = \n"),
        ("domain", &UNIT_RUN.replace("beta = 1.0", "beta = 0.0")[..]),
        ("case", &UNIT_RUN.replace("so3r3", "so5")[..]),
    ] {
        let (out, csv, js) = run(dir.path(), cfg, tag);
        assert_eq!(out.status.code(), Some(1), "{tag}");
        assert!(!out.stderr.is_empty());
        assert!(!csv.exists() && !js.exists(), "{tag}");
    }
    let out = homflow(&["run", "--config", "/nonexistent.toml", "--out-csv", "a", "--out-json", "b"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "u.toml", UNIT_RUN);
    let missing = dir.path().join("no/such/dir/out.csv");
    let out = homflow(&[
        "run",
        "--config",
        c.to_str().unwrap(),
        "--out-csv",
        missing.to_str().unwrap(),
        "--out-json",
        dir.path().join("o.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

const SWEEP: &str = r#"
case = "sl2c"
tie_gamma_to_beta = true
alpha = { min = 0.5, max = 2.0, count = 3, spacing = "log" }
beta = { min = 0.5, max = 2.0, count = 2 }
mu = { values = [0.0, 0.3] }

[integrator]
sample_stride = 0.01
"#;

fn sweep(dir: &Path, cfg: &str, tag: &str, parallel: bool) -> (Output, PathBuf) {
    let c = write(dir, &format!("{tag}.toml"), cfg);
    let js = dir.join(format!("{tag}.json"));
    let mut args = vec!["sweep", "--config", c.to_str().unwrap(), "--out-json", js.to_str().unwrap()];
    if parallel {
        args.push("--parallel");
    }
    (homflow(&args), js)
}

#[test]
fn sweep_parallel_matches_serial() {
    let dir = TempDir::new().unwrap();
    let (a, ja) = sweep(dir.path(), SWEEP, "serial", false);
    let (b, jb) = sweep(dir.path(), SWEEP, "parallel", true);
    assert!(a.status.success() && b.status.success());
    assert_eq!(std::fs::read(&ja).unwrap(), std::fs::read(&jb).unwrap());
    let v = json(&ja);
    assert_eq!(v["points"], 12);
    assert_eq!(v["counts"]["extinct"], 12);
    assert_eq!(v["monitor_failures"], 0);
}

#[test]
fn empty_sweep_has_no_records() {
    let dir = TempDir::new().unwrap();
    let (out, js) = sweep(dir.path(), &SWEEP.replace("count = 2", "count = 0"), "empty", false);
    assert!(out.status.success());
    let v = json(&js);
    assert_eq!(v["points"], 0);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_with_invalid_point_exits_one() {
    let dir = TempDir::new().unwrap();
    let (out, js) = sweep(dir.path(), &SWEEP.replace("[0.0, 0.3]", "[0.0, 3.0]"), "bad", false);
    assert_eq!(out.status.code(), Some(1));
    assert!(!js.exists());
}

#[test]
fn verify_reports_and_is_deterministic() {
    let a = homflow(&["verify", "--samples", "100", "--seed", "7"]);
    let b = homflow(&["verify", "--samples", "100", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("so3r3/oracle_vs_closed_form"));
    // The SL(2,C) structure constants are encoded exactly as tabulated; they
    // give B(C,E) = -8 against a tabulated +8 and a Ricci tensor with
    // Ric(C,E) = -Ric(B,D), so exactly these two checks fail.
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 2, "{text}");
    assert!(failed[0].contains("sl2c/killing_table"));
    assert!(failed[1].contains("sl2c/oracle_isotropy_pattern"));
    assert_eq!(a.status.code(), Some(2));
}

#[test]
fn verify_structural_only() {
    let out = homflow(&["verify", "--samples", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 10);
    assert!(!text.contains("oracle"));
}

#[test]
fn shipped_configs_load() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let run_cfg = homflow_cli::RunConfig::load(&root.join("run_so3r3.toml"), "a".into(), "b".into()).unwrap();
    assert_eq!(run_cfg.initial.nu, 0.5);
    let grid = homflow_cli::SweepConfig::load(&root.join("sweep_so3r3.toml")).unwrap();
    assert_eq!(grid.initial_conditions().unwrap().len(), 100);
    let random = homflow_cli::SweepConfig::load(&root.join("sweep_sl2c_random.toml")).unwrap();
    let pts = random.initial_conditions().unwrap();
    assert_eq!(pts.len(), 50);
    assert!(pts.iter().all(|p| p.beta == p.gamma));
}
