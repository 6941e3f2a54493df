use std::process::{Command, Output};

use serde_json::Value;

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(args)
        .env_remove("CAYLEY_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("one JSON document")
}

#[test]
fn classify_reports_the_dihedral_nnn_example() {
    let out = cayley(&["classify", "--group", "dihedral:6", "--set", "1,5,6,9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["nnn"], Value::Bool(true));
    assert_eq!(v["aut_order"], 48);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "group", "n", "set", "connected", "graph", "aut_order", "normal",
        "regular_subgroups", "nonnormal_regular", "nnn", "ci",
    ];
    expected.sort_unstable();
    let mut keys = keys;
    keys.sort_unstable();
    assert_eq!(keys, expected);
}

#[test]
fn symbolic_and_integer_sets_agree() {
    let a = cayley(&["classify", "--group", "dihedral:6", "--set", "1,5,6,9"]);
    let b = cayley(&[
        "classify", "--group", "dihedral:6", "--set", "a,a^-1,b,a^3*b", "--symbolic",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let n8 = cayley(&["construct", "--lemma41", "--n", "8"]);
    assert_eq!(n8.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&n8.stderr).contains("n = 8"));
    for args in [
        &["classify", "--group", "cyclic:4", "--set", "0,1"][..],
        &["classify", "--group", "cyclic:4", "--set", "9"],
        &["classify", "--group", "cyclic:4", "--set", "x"],
        &["classify", "--group", "square:4", "--set", "1"],
        &["sweep", "--group", "cyclic:20"],
        &["verify", "--theorem", "1", "--max-n", "40"],
        &["verify", "--theorem", "3", "--max-n", "4"],
        &["classify", "--group", "cyclic:4"],
    ] {
        assert_eq!(cayley(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_cyclic_table_passes() {
    let out = cayley(&["verify", "--theorem", "1", "--max-n", "12", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["verified"], Value::Bool(true));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn verify_dihedral_table_finds_nnn_at_six() {
    let out = cayley(&["verify", "--theorem", "2", "--max-n", "6", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let six = rows.iter().find(|r| r["group"]["n"] == 6).unwrap();
    assert!(six["nnn"].as_u64().unwrap() >= 1);
}

#[test]
fn construct_emits_witness_and_classification() {
    let out = cayley(&["construct", "--lemma41", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["witness"]["order"], 20);
    assert_eq!(v["witness"]["x_order"], 10);
    assert_eq!(v["witness"]["regular"], Value::Bool(true));
    assert_eq!(v["witness"]["normal_in_aut"], Value::Bool(false));
    assert_eq!(v["classification"]["nnn"], Value::Bool(true));
    assert_eq!(v["classification"]["aut_order"], 80);
}

#[test]
fn aut_prints_order_and_generators() {
    let out = cayley(&["aut", "--group", "cyclic:6", "--set", "1,5"]);
    let v = stdout_json(&out);
    assert_eq!(v["order"], 12);
    assert!(v["generators"].as_array().unwrap().len() >= 2);
}

#[test]
fn sweep_output_is_independent_of_jobs_and_sink() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d10.jsonl");
    let to_file = cayley(&[
        "sweep", "--group", "dihedral:5", "--jobs", "1", "--quiet", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let parallel = cayley(&["sweep", "--group", "dihedral:5", "--jobs", "3", "--quiet"]);
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, parallel.stdout);
    let text = String::from_utf8(written).unwrap();
    assert_eq!(text.lines().count(), 513);
    assert!(text.lines().last().unwrap().starts_with(r#"{"summary":"#));
}

#[test]
fn progress_goes_to_stderr_only() {
    let out = cayley(&["sweep", "--group", "cyclic:6"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with('{')));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep C_6"));
}

#[test]
fn graph_mode_sweep_keeps_inverse_closed_sets() {
    let out = cayley(&["sweep", "--group", "cyclic:8", "--mode", "graph", "--quiet"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let records: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 17);
    assert!(records[..16].iter().all(|r| r["graph"] == Value::Bool(true)));
}

#[test]
fn records_round_trip_through_the_schema() {
    use cayley_core::classify::Classification;
    use cayley_core::sweep::SweepSummary;

    let out = cayley(&["sweep", "--group", "dihedral:3", "--quiet"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let (summary, records) = lines.split_last().unwrap();
    for line in records {
        let record: Classification = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&record).unwrap(), *line);
    }
    let wrapped: Value = serde_json::from_str(summary).unwrap();
    let summary: SweepSummary = serde_json::from_value(wrapped["summary"].clone()).unwrap();
    assert_eq!(summary.total, records.len());
}
