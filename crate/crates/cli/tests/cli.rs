use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use isocycle::{SpectrumTable, SweepTable, SWEEP_HEADER};

fn isocycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isocycle")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("isocycle-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn spectrum_prints_one_row() {
    let out = isocycle(&["spectrum", "--g", "1", "--omega", "1", "--bigomega", "0"]);
    assert!(out.status.success());
    let t = SpectrumTable::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!((t.rows[0].e0 + 1.0).abs() < 1e-8 && (t.rows[0].e1 + 1.0).abs() < 1e-8);
}

#[test]
fn spectrum_rejects_bad_parameters() {
    let out = isocycle(&["spectrum", "--omega", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycle_success_and_failure_codes() {
    let ok = isocycle(&["cycle", "--varied", "g", "--xi1", "0.5", "--alpha", "1.6", "--method", "approx"]);
    assert!(ok.status.success());
    let t = SweepTable::from_csv(&String::from_utf8(ok.stdout).unwrap()).unwrap();
    assert!(t.rows[0].is_ok() && t.rows[0].w_total.unwrap() > 0.0);

    let bad_alpha = isocycle(&["cycle", "--varied", "g", "--xi1", "0.5", "--alpha", "0.8"]);
    assert_eq!(bad_alpha.status.code(), Some(2));

    let degenerate = isocycle(&["cycle", "--varied", "g", "--xi1", "3.5", "--alpha", "2"]);
    assert_eq!(degenerate.status.code(), Some(3));
    let t = SweepTable::from_csv(&String::from_utf8(degenerate.stdout).unwrap()).unwrap();
    assert_eq!(t.rows[0].status, "error:expansion:degenerate");
}

#[test]
fn cycle_json_output() {
    let out = isocycle(&["cycle", "--varied", "omega", "--xi1", "2.5", "--alpha", "0.8", "--format", "json"]);
    assert!(out.status.success());
    let t = SweepTable::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows[0].method, "exact");
}

#[test]
fn sweep_writes_file_and_is_deterministic() {
    let dir = scratch("sweep");
    let cfg = dir.join("g.cfg");
    fs::write(&cfg, "varied = g\nxi1_grid = 0.05, 1.45, 8\nalphas = 1.2, 2.0\nmethod = both\n").unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        let out = isocycle(&["sweep", "--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER);
    assert_eq!(SweepTable::from_csv(&text).unwrap().rows.len(), 8 * 2 * 2);
}

#[test]
fn sweep_config_errors_exit_with_two() {
    let dir = scratch("config");
    let cfg = dir.join("bad.cfg");
    fs::write(&cfg, "varied = g\nxi1_grid = 0.05, 1.45, 8\nalphas = 0.5\n").unwrap();
    let out = isocycle(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alphas"));

    let missing = isocycle(&["sweep", "--config", dir.join("absent.cfg").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sweep_with_every_point_failing_exits_with_three() {
    let dir = scratch("allfail");
    let cfg = dir.join("deg.cfg");
    fs::write(&cfg, "varied = g\nxi1_grid = 3.5, 4.0, 2\nalphas = 2\nmethod = exact\n").unwrap();
    let out = isocycle(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let t = SweepTable::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert!(t.rows.iter().all(|r| !r.is_ok()));
}

#[test]
fn figure_writes_named_file() {
    let dir = scratch("figure");
    let out = isocycle(&["figure", "fig1", "--out", dir.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let t = SpectrumTable::from_json(&fs::read_to_string(dir.join("fig1.json")).unwrap()).unwrap();
    assert!(!t.rows.is_empty());
    assert_eq!(isocycle(&["figure", "fig2"]).status.code(), Some(2));
}
