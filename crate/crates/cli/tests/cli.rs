use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pantsflat"))
        .args(args)
        .arg("--no-timestamp")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (code, json)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pantsflat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn farey_distance() {
    let (code, r) = report(&["farey", "distance", "0/1", "1/0"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["distance"], 1);
    assert_eq!(r["command"], "farey distance");
    assert!(r.get("timestamp").is_none());
}

#[test]
fn farey_geodesics_between_negative_and_positive() {
    let (code, r) = report(&["farey", "geodesics", "-1/1", "1/1", "--height", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["paths"].as_array().unwrap().len(), 2);
}

#[test]
fn interval_file_fails_total_geodesy() {
    let path = scratch(
        "interval.json",
        r#"{"vertices":["-1/1","-1/2","-1/3","0/1","1/3","1/2","1/1"]}"#,
    );
    let (code, r) = report(&[
        "farey",
        "check-subgraph",
        path.to_str().unwrap(),
        "--ball-radius",
        "3",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["pass"], false);
    assert_eq!(r["result"]["convex"]["holds"], true);
    let witness: Vec<&str> = r["result"]["totally_geodesic"]["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(witness, ["-1/1", "1/0", "1/1"]);
}

#[test]
fn ball_exports_dot() {
    let out = run(&[
        "farey", "ball", "--radius", "1", "--height", "2", "--format", "dot",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph ball {"));
    assert!(text.contains("\"0/1\" -- \"1/0\";"));
}

#[test]
fn lemma_sweeps() {
    let (code, r) = report(&["lemmas", "int", "--height", "8"]);
    assert_eq!(code, 0);
    assert!(r["result"]["cases"].as_u64().unwrap() > 0);
    let (code, r) = report(&["lemmas", "int", "--height", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cases"], 0);
    let (code, _) = report(&["lemmas", "lk", "--height", "10"]);
    assert_eq!(code, 0);
}

#[test]
fn seeded_suites_are_byte_identical() {
    let a = run(&["lemmas", "prt", "--count", "40", "--seed", "5"]);
    let b = run(&["lemmas", "prt", "--count", "40", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn figure2_and_orthogonality() {
    let (code, r) = report(&["scenario", "figure2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["audit"]["best"], 2);
    let (code, r) = report(&["scenario", "orthogonality", "--count", "200", "--seed", "3"]);
    assert_eq!(code, 0);
    for mix in r["result"]["mixes"].as_array().unwrap() {
        assert_eq!(mix["passed"], 200);
    }
}

#[test]
fn audit_of_generated_and_figure2_paths() {
    let out = run(&["scenario", "paths", "--count", "5", "--max-len", "6"]);
    let path = scratch("paths.json", &String::from_utf8(out.stdout).unwrap());
    let (code, r) = report(&["scenario", "audit", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["paths"], 5);

    let (_, fig) = report(&["scenario", "figure2"]);
    let path = scratch("figure2.json", &fig["result"]["path"].to_string());
    let (code, r) = report(&["scenario", "audit", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["audits"][0]["best"], 2);
}

#[test]
fn flats_commands() {
    let (code, r) = report(&["flats", "rank", "--genus", "7", "--boundary", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["max_handles"], 9);
    assert_eq!(r["result"]["pieces"], 9);
    let (_, r) = report(&["flats", "rank", "--genus", "0", "--boundary", "4"]);
    assert_eq!(r["result"]["kappa"], 1);
    assert_eq!(r["result"]["pieces"], 1);
    assert_eq!(r["result"]["admits_handle_multicurve"], false);
    let (code, r) = report(&["flats", "certify", "--n", "2", "--window", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["pairs_checked"], 6561);
    let out = run(&[
        "flats", "export", "--n", "2", "--window", "1", "--format", "dot",
    ]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("\"-1,-1\" -- \"-1,0\";"));
}

#[test]
fn text_renders_the_report() {
    let out = run(&["farey", "distance", "0/1", "2/1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "result.distance: 2"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["farey", "distance", "3/-1", "0/1"][..],
        &["farey", "distance", "x", "0/1"],
        &["flats", "rank", "--genus", "7"],
        &["flats", "rank", "--genus", "0", "--boundary", "3"],
        &["farey", "distance", "0/1", "1/0", "--format", "dot"],
        &["scenario", "audit", "/nonexistent/file.json"],
        &["bogus"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
}
