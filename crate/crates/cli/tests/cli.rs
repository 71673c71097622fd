use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timing(out: &Output) -> String {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.contains("\"timing_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn decide_exit_codes() {
    let out = selfsim(&["decide", "--sigma", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["decision"]["verdict"], "PositiveMeasure");
    assert_eq!(doc["decision"]["lambda_E"]["value"], "1");

    assert_eq!(selfsim(&["decide", "--sigma", "0,1,4"]).status.code(), Some(1));

    let out = selfsim(&["decide", "--sigma", "0,1,8,9", "--nmax", "16", "--kmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["decision"]["fired_condition"], "condition-ix (bounded)");

    let out = selfsim(&["decide", "--sigma", "0,1,4,6", "--nmax", "1", "--kmax", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["decide", "--sigma", "0,1,x"][..],
        &["decide"],
        &["decide", "--sigma", "0"],
        &["decide", "--sigma", "0,0,1"],
        &["render", "--sigma", "0,1", "--q", "3/2", "--levels", "2"],
        &["multigeo", "--k", "1,0", "--base", "4"],
        &["ifs", "--points", "0,0:1", "--sweep", "2"],
        &["frobnicate"],
    ] {
        let out = selfsim(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
    }
}

#[test]
fn guard_exits_70() {
    let out = selfsim(&["render", "--sigma", "0,1,2,3", "--levels", "9", "--max-points", "100"]);
    assert_eq!(out.status.code(), Some(70));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn output_is_stable_under_flag_order() {
    let a = selfsim(&["decide", "--sigma", "0,1,8,9", "--nmax", "6", "--levels", "2"]);
    let b = selfsim(&["decide", "--levels", "2", "--nmax", "6", "--sigma", "0,1,8,9"]);
    assert_eq!(without_timing(&a), without_timing(&b));
}

#[test]
fn render_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("rows.svg");
    let csv = dir.path().join("rows.csv");
    let out = selfsim(&[
        "render",
        "--sigma",
        "0,1,8,9",
        "--q",
        "1/4",
        "--levels",
        "3",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.contains(r#"width="1000" height="120""#));
    assert_eq!(svg.matches("<g ").count(), 3);
    let csv = std::fs::read_to_string(csv).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "level,lo_num,lo_den,hi_num,hi_den");
    assert!(rows.contains(&"2,0,1,1,1") && rows.contains(&"2,2,1,3,1"));

    let cantor = selfsim(&["render", "--sigma", "0,1", "--q", "1/3", "--levels", "4"]);
    let doc = json_of(&cantor);
    let counts: Vec<usize> = doc["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["intervals"].as_array().unwrap().len())
        .collect();
    assert_eq!(counts, [2, 4, 8, 16]);
}

#[test]
fn cantorval_rows_keep_gaps_and_core() {
    let doc = json_of(&selfsim(&["render", "--sigma", "0,2,3,5", "--q", "1/4", "--levels", "6"]));
    let levels = doc["levels"].as_array().unwrap();
    for level in &levels[1..] {
        assert!(level["intervals"].as_array().unwrap().len() > 1);
    }
    assert_ne!(levels[5]["measure"], "0");
}

#[test]
fn multigeo_example() {
    let doc = json_of(&selfsim(&["multigeo", "--k", "1,8", "--base", "4"]));
    let result = &doc["result"];
    assert_eq!(result["classification"]["kind"], "FiniteUnionOfIntervals");
    assert_eq!(result["intervals"], serde_json::json!([["0", "1"], ["2", "3"]]));
    assert_eq!(result["reduced"]["k"], serde_json::json!([1, 2]));

    let doc = json_of(&selfsim(&["multigeo", "--k", "3,2", "--base", "4"]));
    assert_eq!(doc["result"]["classification"]["kind"], "Cantorval");
    assert_eq!(doc["result"]["nitecki"]["kind"], "cantorval");
}

#[test]
fn ifs_sweep_example() {
    let doc = json_of(&selfsim(&["ifs", "--points", "0,0:1,0:0,1", "--sweep", "5"]));
    let positive: Vec<&str> = doc["result"]["positive"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for u in ["2", "1/2", "5"] {
        assert!(positive.contains(&u), "{u}");
    }
    assert!(!positive.contains(&"1"));

    let out = selfsim(&["ifs", "--points", "0,0:1,0:1,1:0,sqrt(2)", "--u", "2*sqrt(2)"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["decision"]["fired_condition"], "no-common-divisor");
}

#[test]
fn search_example() {
    let doc = json_of(&selfsim(&["search", "--size", "4", "--bound", "9"]));
    assert_eq!(doc["result"]["candidates"], serde_json::json!([["0", "1", "8", "9"]]));
}

fn save(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.push("--json");
    full.push(&p);
    let out = selfsim(&full);
    assert!(out.status.code().unwrap() <= 2, "{args:?}");
    p
}

#[test]
fn verify_accepts_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let reports = [
        save(dir.path(), "d.json", &["decide", "--sigma", "0,1,8,9", "--levels", "2"]),
        save(dir.path(), "z.json", &["decide", "--sigma", "0,1,3"]),
        save(dir.path(), "q.json", &["decide", "--sigma", "0,1,sqrt(5)"]),
        save(dir.path(), "r.json", &["render", "--sigma", "0,1", "--q", "1/3", "--levels", "3"]),
        save(dir.path(), "m.json", &["multigeo", "--k", "3,2", "--base", "4"]),
        save(dir.path(), "i.json", &["ifs", "--points", "0,0:1,0:0,1", "--sweep", "3"]),
        save(dir.path(), "s.json", &["search", "--size", "4", "--bound", "9"]),
    ];
    for path in &reports {
        let out = selfsim(&["verify", path]);
        assert_eq!(out.status.code(), Some(0), "{path}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn verify_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = save(dir.path(), "d.json", &["decide", "--sigma", "0,1,4"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let forged = text.replace("\"MeasureZero\"", "\"PositiveMeasure\"");
    std::fs::write(&path, forged).unwrap();
    let out = selfsim(&["verify", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("rejected"));

    let path = save(dir.path(), "s.json", &["search", "--size", "4", "--bound", "9"]);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("\"9\"", "\"7\"")).unwrap();
    assert_eq!(selfsim(&["verify", &path]).status.code(), Some(1));
}
