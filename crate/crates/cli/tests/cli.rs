//! End-to-end runs of the `epilab` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn epilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epilab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn results(v: &Value) -> &serde_json::Map<String, Value> {
    v["results"].as_object().expect("results object")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_names_every_scenario() {
    let out = epilab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "born", "chsh", "mermin", "busch", "example17", "birnbaum", "reml", "multinomial", "entropy", "orbits", "nelson",
        "theorem6",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "missing {name}");
    }
}

#[test]
fn invalid_invocations_exit_with_two() {
    assert_eq!(epilab(&["no-such-scenario"]).status.code(), Some(2));
    let bad_flag = epilab(&["born", "--theta", "0.3"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_flag.stderr).contains("theta"));
    assert_eq!(epilab(&["mermin", "--model", "nobody", "--n", "10"]).status.code(), Some(2));
    assert_eq!(epilab(&["born", "--json", "--csv"]).status.code(), Some(2));
    assert_eq!(epilab(&["multinomial", "--theta", "1.5"]).status.code(), Some(2));
}

#[test]
fn failed_threshold_exits_with_three() {
    let out = epilab(&["example17", "--n", "200000", "--check"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL bayes_near_0.43"));
    assert!(stderr.contains("PASS group_one_third"));
}

#[test]
fn passing_checks_exit_with_zero() {
    for args in [
        vec!["born", "--check"],
        vec!["chsh", "--check"],
        vec!["busch", "--n", "8", "--check"],
        vec!["multinomial", "--theta", "-0.3", "--check"],
        vec!["theorem6", "--check"],
        vec!["orbits", "--check"],
    ] {
        let out = epilab(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn json_report_has_sorted_keys_and_expected_shape() {
    let out = epilab(&["born", "--json", "--seed", "3", "--n", "50"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let v = json_of(&out);
    assert_eq!(v["scenario"], "born");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["parameters"]["n"], 50);
    let keys: Vec<&String> = results(&v).keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let top = ["\"elapsed_ms\"", "\"parameters\"", "\"results\"", "\"scenario\"", "\"seed\""];
    let positions: Vec<usize> = top.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn same_seed_gives_identical_results() {
    let run = |seed: &str| {
        let mut v = json_of(&epilab(&["mermin", "--json", "--n", "100000", "--seed", seed]));
        v["elapsed_ms"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = epilab(&["chsh", "--csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(header.len(), row.len());
    let value = row[header.iter().position(|h| *h == "value").unwrap()];
    assert!((value - 2.0 * 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn birnbaum_reads_experiment_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{
        "e1": {"theta_grid": [0.25, 0.75], "outcomes": ["a", "b"], "likelihood": [[0.25, 0.75], [0.75, 0.25]]},
        "e2": {"theta_grid": [0.25, 0.75], "outcomes": ["x", "y", "w"], "likelihood": [[0.125, 0.375], [0.5, 0.5], [0.375, 0.125]]},
        "z1": "a",
        "z2": "x"
    }"#;
    let path = write(dir.path(), "pair.json", doc);
    let out = epilab(&["birnbaum", "--input", &path, "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(results(&v)["proportional"], 1.0);
    assert_eq!(results(&v)["sufficient"], 1.0);
    assert!((results(&v)["c"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let broken = write(dir.path(), "broken.json", "{\"e1\": 3}");
    assert_eq!(epilab(&["birnbaum", "--input", &broken]).status.code(), Some(2));
    assert_eq!(epilab(&["birnbaum", "--input", "/nonexistent/input.json"]).status.code(), Some(2));
}

#[test]
fn reml_entropy_and_orbits_read_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let reml = write(dir.path(), "reml.json", r#"{"y": [1, 2, 4, 7], "X": [[1], [1], [1], [1]]}"#);
    let v = json_of(&epilab(&["reml", "--input", &reml, "--json"]));
    // Sample variance of 1, 2, 4, 7 with n − 1 = 3.
    assert!((results(&v)["estimate"].as_f64().unwrap() - 7.0).abs() < 1e-12);

    let joint = write(dir.path(), "joint.json", r#"{"joint": [[0.5, 0], [0, 0.5]]}"#);
    let v = json_of(&epilab(&["entropy", "--input", &joint, "--json"]));
    let c = results(&v)["correlation"].as_f64().unwrap();
    assert!((c - std::f64::consts::LN_2).abs() < 1e-12);

    let action = write(
        dir.path(),
        "action.json",
        r#"{"space": ["a", "b", "c", "d"], "elements": [[0, 1, 2, 3], [1, 0, 3, 2]], "eta": ["u", "u", "v", "v"]}"#,
    );
    let out = epilab(&["orbits", "--input", &action, "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["parameters"]["orbits"], serde_json::json!([["a", "b"], ["c", "d"]]));
}

#[test]
fn nelson_writes_snapshot_and_ensemble_files() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("snap.csv");
    let ens = dir.path().join("ens.csv");
    let out = epilab(&[
        "nelson",
        "--n",
        "2000",
        "--steps",
        "100",
        "--snapshot",
        snap.to_str().unwrap(),
        "--ensemble",
        ens.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snap_text = std::fs::read_to_string(&snap).unwrap();
    assert_eq!(snap_text.lines().next().unwrap(), "x,re_f,im_f,rho,u,v,b");
    assert_eq!(snap_text.lines().count(), 1 + 1201);
    let ens_text = std::fs::read_to_string(&ens).unwrap();
    assert_eq!(ens_text.lines().next().unwrap(), "path_id,x_final");
    assert_eq!(ens_text.lines().count(), 1 + 2000);
}
