use std::fs;
use std::process::Command;

use serde_json::Value;

use dualquant::cli::run;
use dualquant::gridio::read_grid;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["dualquant".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, err) = call(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn train1d_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let v = json(&["train1d", "--dist", "uniform:0,1", "--n", "11", "--out", out.to_str().unwrap()]);
    let grid = floats(&v["grid"]);
    for (i, x) in grid.iter().enumerate() {
        assert!((x - i as f64 / 10.0).abs() < 1e-8);
    }
    assert!((v["error"].as_f64().unwrap() - 1.0 / 600.0).abs() < 1e-10);
    let (g, meta) = read_grid(&out).unwrap();
    assert_eq!(g.len(), 11);
    assert_eq!(meta.distribution.as_deref(), Some("uniform:0,1"));
}

#[test]
fn eval_exact_and_voronoi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    fs::write(&path, "x\n0\n0.5\n1\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["eval", "--grid", p, "--dist", "uniform:0,1", "--exact", "--compare-voronoi"]);
    let dual = v["value"].as_f64().unwrap();
    assert!((dual - 1.0 / 24.0).abs() < 1e-12);
    assert!(dual >= v["voronoi"]["value"].as_f64().unwrap());

    let v = json(&["--seed", "2", "eval", "--grid", p, "--dist", "normal:0,1", "--extended", "--samples", "20000"]);
    assert!(v["value"].as_f64().unwrap().is_finite());
    // a bounded grid cannot cover a normal law without the extension
    assert_eq!(call(&["eval", "--grid", p, "--dist", "normal:0,1", "--exact"]).0, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["train1d", "--n", "3"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["train1d", "--dist", "cauchy:0,1", "--n", "3"]).0, 2);
    assert_eq!(call(&["train1d", "--dist", "normal:0,1", "--n", "3"]).0, 2);
    let (code, _, err) = call(&["rate-table", "--ladder", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("at least 3"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dualquant");
    let ok = Command::new(bin).args(["train1d", "--dist", "uniform:0,1", "--n", "3"]).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("error"));
    let bad = Command::new(bin).args(["eval"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn rate_table_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rates.csv");
    let v = json(&["rate-table", "--kind", "uniform1d", "--ladder", "5,9,17,33", "--out", out.to_str().unwrap()]);
    assert!((v["slope"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("n,cells,d_root,n_pow_d_root"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn trainnd_is_deterministic_and_exports_svg() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("t.json");
    let args = ["--seed", "7", "trainnd", "--dist", "uniform2d", "--n", "16", "--pin", "corners", "--steps", "20000", "--eval-samples", "20000"];
    let mut first = args.to_vec();
    first.extend(["--out", grid.to_str().unwrap()]);
    let a = json(&first);
    let b = json(&args);
    assert_eq!(a["grid"], b["grid"]);
    assert_eq!(a["pinned"], serde_json::json!([0, 1, 2, 3]));

    let svg = dir.path().join("t.svg");
    let v = json(&["export-svg", "--grid", grid.to_str().unwrap(), "--out", svg.to_str().unwrap(), "--hull"]);
    assert_eq!(v["points"], 16);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 16);
    assert!(dir.path().join("t.csv").exists());

    let line = dir.path().join("line.csv");
    fs::write(&line, "0\n1\n").unwrap();
    assert_eq!(call(&["export-svg", "--grid", line.to_str().unwrap(), "--out", svg.to_str().unwrap()]).0, 2);
}

#[test]
fn cubature_reports_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    fs::write(&path, "0\n0.5\n1\n").unwrap();
    let v = json(&["cubature", "--grid", path.to_str().unwrap(), "--dist", "uniform:0,1", "--f", "quadratic", "--samples", "50000"]);
    let w = floats(&v["weights"]);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    for (wi, target) in w.iter().zip([0.25, 0.5, 0.25]) {
        assert!((wi - target).abs() < 0.01);
    }
    assert_eq!(v["second_order"]["satisfied"], true);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nn = 5\nmode = extended\ndist = uniform:0,1\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&["--config", c, "train1d", "--dist", "normal:0,1"]);
    assert_eq!(floats(&v["grid"]).len(), 5);
    assert_eq!(v["mode"], "extended");
    assert_eq!(v["distribution"], "normal:0,1");

    fs::write(&cfg, "not a pair\n").unwrap();
    assert_eq!(call(&["--config", c, "train1d"]).0, 2);
}
