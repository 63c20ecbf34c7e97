//! End-to-end runs of the `crossnum` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use crossnum::source::GraphSource;
use crossnum::suite::{self, CheckKind, Format, SuiteConfig};
use serde_json::Value;

fn crossnum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossnum")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn generate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let (g, c) = (path(dir.path(), "g.txt"), path(dir.path(), "g.xy"));
    assert!(crossnum(&["gen", "grid", "3", "--out", &g, "--coords", &c]).status.success());
    assert!(fs::read_to_string(&g).unwrap().starts_with("n 9\n"));

    let out = crossnum(&["crossings", &g, "--coords", &c]);
    assert_eq!(json(&out)["crossings"], 0);
    assert_eq!(json(&crossnum(&["planar", &g]))["planar"], true);

    let out = crossnum(&["bisect", "exact", &g]);
    assert!(out.status.success());
    let b = json(&out);
    assert_eq!(b["width"], 3);
    assert_eq!(b["exactness"], "exact");
    assert_eq!(b["part_one"][0], 0);

    let out = crossnum(&["bounds", &g, "--A", "0.5", "--alpha", "1", "--k", "2"]);
    let v = json(&out);
    assert_eq!(v["params"]["c"], 30976.0);
    assert_eq!(v["euler"]["value"], 0.0);
}

#[test]
fn exact_crossing_number_of_k5() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "k5.txt");
    assert!(crossnum(&["gen", "kn", "5", "--out", &g]).status.success());
    let v = json(&crossnum(&["cr", "exact", "--max-k", "2", &g]));
    assert_eq!(v["value"], 1);
    assert_eq!(v["certificate"]["crossings"].as_array().unwrap().len(), 1);
    let v = json(&crossnum(&["cr", "exact", "--max-k", "0", &g]));
    assert_eq!(v["value"], "exceeds k_max");
}

#[test]
fn decompose_and_verify_trace() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = (path(dir.path(), "k4.txt"), path(dir.path(), "trace.json"));
    fs::write(&g, "# K4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = crossnum(&["decompose", "--A", "0.5", "--alpha", "1", &g, "--trace", &t]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["k"], 3);

    let trace: Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    for key in ["split", "params", "levels", "k", "sigma", "final_edge_count"] {
        assert!(trace.get(key).is_some(), "trace lacks {key}");
    }
    for key in ["n", "e", "N", "d_bar", "groups"] {
        assert!(trace["split"].get(key).is_some(), "split lacks {key}");
    }
    for key in ["i", "M_i", "m_i", "components", "deleted"] {
        assert!(trace["levels"][0].get(key).is_some(), "level lacks {key}");
    }
    assert_eq!(trace["sigma"], 6);

    let out = crossnum(&["verify", "trace", &t, "--max-k", "2"]);
    assert!(out.status.success());
    let checks = json(&out)["checks"].as_array().unwrap().clone();
    assert!(checks.iter().all(|c| c["status"] == "pass"), "{checks:?}");

    let mut forged = trace;
    forged["levels"][0]["m_i"] = 100.into();
    fs::write(&t, forged.to_string()).unwrap();
    let out = crossnum(&["verify", "trace", &t]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn suite_command_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    let report = path(dir.path(), "report.csv");
    fs::write(&cfg, r#"{"corpus": ["K5", "grid(3)"], "checks": ["pss", "t3"], "format": "csv"}"#).unwrap();
    let out = crossnum(&["suite", &cfg, "--out", &report]);
    assert!(out.status.success());
    let csv = fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().next(), Some("graph,n,e,check,lhs,rhs,holds,micros"));
    assert_eq!(csv.lines().count(), 1 + 2 + 6);

    fs::write(&cfg, r#"{"corpus": ["nonsense"], "checks": ["pss"]}"#).unwrap();
    assert_eq!(crossnum(&["suite", &cfg]).status.code(), Some(1));
    fs::write(&cfg, r#"{"corpus": [], "checks": ["pss"]}"#).unwrap();
    assert_eq!(crossnum(&["suite", &cfg]).status.code(), Some(2));
}

#[test]
fn bad_input_files_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "bad.txt");
    fs::write(&g, "0 1\n1 two\n").unwrap();
    let out = crossnum(&["planar", &g]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:2"));
}

#[test]
fn reports_round_trip_and_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SuiteConfig::new(
        vec![GraphSource::Spec("petersen".into()), GraphSource::Spec("random(12,0.3)".into())],
        vec![CheckKind::Pss, CheckKind::Jensen, CheckKind::Trace, CheckKind::Bounds],
    );
    let report = suite::run_suite(&cfg).unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    suite::emit_report(&report, Format::Json, &a).unwrap();
    suite::emit_report(&suite::run_suite(&cfg).unwrap(), Format::Json, &b).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let back = suite::parse_report(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(back, report);

    let one = suite::Report::from_records(report.records[..1].to_vec());
    assert_eq!(suite::render_report(&one, Format::Csv).unwrap().lines().count(), 2);
}
