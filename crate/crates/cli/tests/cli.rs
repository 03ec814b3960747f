use std::process::{Command, Output};

use ends_cli::{parse_config, Preset};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algebra-ends")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn winding_reports_exact_rational() {
    let out = bin(&["winding", "--preset", "laurent1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["phi"], "2");
    assert_eq!(v["inputs"]["params"]["seed"], 1);
    assert_eq!(v["command"], "winding");
}

#[test]
fn ends_verify_verdicts_and_exit_codes() {
    let ok = bin(&["ends-verify", "--preset", "sigma3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["result"]["k"], 3);
    assert_eq!(json(&ok)["result"]["verdict"], "Certified");

    let refuted = bin(&["ends-verify", "--preset", "kx"]);
    assert_eq!(refuted.status.code(), Some(1));
    assert_ne!(json(&refuted)["result"]["verdict"], "Certified");
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, Preset::Laurent1.text()).unwrap();
    let out = dir.path().join("growth.csv");
    let r = bin(&["growth", cfg.to_str().unwrap(), "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,f,gap,log_ratio"));
    assert!(lines.next().unwrap().starts_with("1,3,"));
}

#[test]
fn csv_only_for_tabular_commands() {
    let r = bin(&["winding", "--preset", "laurent1", "--format", "csv"]);
    assert_eq!(r.status.code(), Some(2));
    let d = bin(&["density", "--preset", "z2", "--format", "csv"]);
    assert_eq!(d.status.code(), Some(0));
    assert!(String::from_utf8(d.stdout).unwrap().starts_with("t,numerator,denominator,density\n"));
}

#[test]
fn config_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[algebra]\nfamily = \"laurent\"\nrank = 1\n\n[subspace.V]\npredicate = \"exp(3) >= 0\"\n")
        .unwrap();
    let r = bin(&["growth", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8(r.stderr).unwrap();
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin(&["no-such-command", "--preset", "kx"]).status.code(), Some(2));
    assert_eq!(bin(&["growth"]).status.code(), Some(2));
    assert_eq!(bin(&["cocycle", "--preset", "kx"]).status.code(), Some(2));
}

#[test]
fn print_config_round_trips() {
    for p in ["kx", "laurent1", "sigma3", "example4", "z2"] {
        let r = bin(&["growth", "--preset", p, "--print-config", "--seed", "9"]);
        assert_eq!(r.status.code(), Some(0));
        let cfg = parse_config(std::str::from_utf8(&r.stdout).unwrap()).unwrap();
        assert_eq!(cfg.params.seed, Some(9));
    }
}

#[test]
fn dump_adds_operator_columns() {
    let plain = json(&bin(&["cocycle", "--preset", "laurent1"]));
    assert!(plain["result"].get("dump").is_none());
    let dumped = json(&bin(&["cocycle", "--preset", "laurent1", "--dump"]));
    let d = &dumped["result"]["dump"];
    assert_eq!(d["rank"], 1);
    assert!(d["columns"].as_object().is_some_and(|c| !c.is_empty()));
}

#[test]
fn seed_changes_sampled_reports_only() {
    let a = bin(&["property-suite", "--preset", "laurent1", "--seed", "1"]);
    let b = bin(&["property-suite", "--preset", "laurent1", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
    let g1 = bin(&["growth", "--preset", "laurent1", "--seed", "1"]);
    let g2 = bin(&["growth", "--preset", "laurent1", "--seed", "2"]);
    assert_eq!(json(&g1)["result"], json(&g2)["result"]);
}

#[test]
fn report_all_collects_subreports() {
    let r = bin(&["report-all", "--preset", "example4"]);
    let v = json(&r);
    let reports = v["result"]["reports"].as_object().unwrap();
    for k in ["growth", "ends-verify", "defect", "cocycle", "property-suite"] {
        assert!(reports.contains_key(k), "{k}");
    }
    assert_eq!(reports["ends-verify"]["report"]["k"], 4);
}
