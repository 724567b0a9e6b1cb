use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dirmono_cli::{execute, exit_code, format_report, parse_config, Format, Report};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn dirmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirmono"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config_run(name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec!["check", "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    dirmono(&args)
}

#[test]
fn exit_codes_on_fixtures() {
    assert_eq!(config_run("product3-all.json", &[]).status.code(), Some(0));
    assert_eq!(config_run("m4-pure.json", &[]).status.code(), Some(0));
    let out = config_run("fgm2-mixed-refuted.json", &["--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.verdicts[0].counterexample.is_some());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["check", "--family", "amh", "--dim", "3", "--delta", "0.5"][..],
        &["check", "--family", "w", "--dim", "3"],
        &["check", "--family", "gumbel", "--dim", "2"],
        &[
            "check",
            "--family",
            "product",
            "--dim",
            "2",
            "--direction",
            "+,?",
        ],
        &["check", "--family", "fgm", "--dim", "2", "--lambda", "-2"],
        &["check", "--nope"],
        &["check", "--config", "/nonexistent/dirmono.json"],
    ] {
        let out = dirmono(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_two() {
    let out = dirmono(&[
        "check",
        "--family",
        "product",
        "--dim",
        "2",
        "--grid",
        "3",
        "--out",
        "/nonexistent/dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_direction_list_is_a_vacuous_pass() {
    let out = config_run("empty.json", &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.verdicts.is_empty());
    assert_eq!(
        config_run("empty.json", &["--format", "csv"]).status.code(),
        Some(0)
    );
}

#[test]
fn flags_override_config_file() {
    let path = fixture("fgm2-positive.json");
    let config = parse_config([
        "dirmono",
        "check",
        "--config",
        path.to_str().unwrap(),
        "--lambda",
        "-0.5",
        "--grid",
        "9",
    ])
    .unwrap();
    assert_eq!(config.grid.resolution(), 9);
    assert_eq!(config.spec, dirmono_core::CopulaSpec::fgm(2, -0.5).unwrap());
    assert!(config.directions.is_none());
}

#[test]
fn json_report_round_trips_bit_exact() {
    let path = fixture("fgm2-positive.json");
    let config = parse_config(["dirmono", "check", "--config", path.to_str().unwrap()]).unwrap();
    let report = execute(&config).unwrap();
    let text = format_report(&report, Format::Json).unwrap();
    assert!(text.contains("\"schema_version\": 1"));
    for key in ["uLow", "uHigh", "lhs", "rhs", "violation"] {
        assert!(text.contains(&format!("\"{key}\"")), "{key}");
    }
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    let bits = |r: &Report| -> Vec<u64> {
        r.verdicts
            .iter()
            .filter_map(|v| v.counterexample.as_ref())
            .flat_map(|c| [c.lhs.to_bits(), c.rhs.to_bits(), c.violation.to_bits()])
            .collect()
    };
    assert_eq!(bits(&back), bits(&report));
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> serde_json::Value {
        let out = dir.path().join(name);
        let status = config_run(
            "fgm3-negative.json",
            &["--format", "json", "--out", out.to_str().unwrap()],
        )
        .status;
        assert_eq!(status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let obj = v.as_object_mut().unwrap();
        obj.remove("timing_ms");
        obj["config"].as_object_mut().unwrap().remove("out");
        v
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn text_and_csv_layouts() {
    let path = fixture("fgm2-positive.json");
    let config = parse_config(["dirmono", "check", "--config", path.to_str().unwrap()]).unwrap();
    let report = execute(&config).unwrap();
    assert_eq!(exit_code(&report), 1);

    let text = format_report(&report, Format::Text).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("(+,+) PASS@g=21 both slack=")));
    assert!(text
        .lines()
        .any(|l| l.starts_with("(+,-) REFUTED@g=21 both")));

    let csv = format_report(&report, Format::Csv).unwrap();
    let mut rows = csv::Reader::from_reader(csv.as_bytes());
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 4);
    assert_eq!(&records[1][0], "+,-");
    assert_eq!(&records[1][2], "REFUTED");
}

#[test]
fn decreasing_notion_disagreements_are_not_defects() {
    let out = dirmono(&[
        "check", "--family", "fgm", "--dim", "2", "--lambda", "0.5", "--notion", "D", "--grid",
        "9", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.disagreements.iter().all(|d| d.by_duality));
}
