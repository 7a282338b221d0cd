use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

fn weil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

/// A diagram file in the temp directory, removed on drop.
struct Temp(std::path::PathBuf);

impl Temp {
    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for Temp {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn diagram_file(text: &str) -> Temp {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let n = NEXT.fetch_add(1, Ordering::Relaxed);
    let path = std::env::temp_dir().join(format!("weil-cli-{}-{n}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    Temp(path)
}

const PARALLEL_PAIR: &str = r#"{
  "nodes": [{"id": "s", "algebra": "x,y | x^2, y^2 ; nil 3"}, {"id": "t", "algebra": "x | x^2 ; nil 2"}],
  "edges": [{"from": "s", "to": "t", "images": ["0", "x"]}, {"from": "s", "to": "t", "images": ["0", "0"]}]
}"#;

#[test]
fn parse_prints_dimension_and_basis() {
    let o = weil(&["parse", "x | x^3 ; nil 3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dimension: 3"));
    let j = json(&weil(&["parse", "x,y | x^2, y^2 ; nil 3", "--json"]));
    assert_eq!(j["dim"], 4);
    assert_eq!(j["basis"], serde_json::json!(["1", "x", "y", "x*y"]));
}

#[test]
fn tensor_dimension_multiplies() {
    let j = json(&weil(&["--json", "tensor", "x | x^2 ; nil 2", "x | x^3 ; nil 3"]));
    assert_eq!(j["dim"], 6);
}

#[test]
fn fibered_tensor_of_dual_numbers() {
    let o = weil(&["fibered-tensor", "x | x^2 ; nil 2", "x | x^2 ; nil 2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("dimension: 3"), "{text}");
    let j = json(&weil(&["fibered-tensor", "x | x^2 ; nil 2", "x | x^2 ; nil 2", "--json"]));
    assert_eq!(j["subspace"], serde_json::json!(["1", "x", "x*y"]));
}

#[test]
fn equalizer_and_limit_of_the_parallel_pair() {
    let f = diagram_file(PARALLEL_PAIR);
    let j = json(&weil(&["equalizer", f.path(), "--json"]));
    assert_eq!(j["algebra"]["dim"], 3);
    assert_eq!(j["subspace"], serde_json::json!(["1", "x", "x*y"]));
    let j = json(&weil(&["limit", f.path(), "--json"]));
    assert_eq!(j["algebra"]["dim"], 3);
}

#[test]
fn equalizer_needs_a_parallel_pair() {
    let one_edge = PARALLEL_PAIR.replace(r#", {"from": "s", "to": "t", "images": ["0", "0"]}"#, "");
    let f = diagram_file(&one_edge);
    assert_eq!(weil(&["equalizer", f.path()]).status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_with_two() {
    assert_eq!(weil(&["parse", "x | x^2 ; nil"]).status.code(), Some(2));
    assert_eq!(weil(&["limit", "/nonexistent/diagram.json"]).status.code(), Some(2));
    let f = diagram_file("{\"nodes\": [], \"extra\": 1}");
    assert_eq!(weil(&["limit", f.path()]).status.code(), Some(2));
    assert_eq!(weil(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(weil(&["jet", "--expr", "u0", "--algebra", "x | x^2 ; nil 2", "--at", "pi"]).status.code(), Some(2));
}

#[test]
fn jet_of_a_cube_is_binomial() {
    let j = json(&weil(&[
        "jet",
        "--expr",
        "u0^3",
        "--algebra",
        "x | x^4 ; nil 4",
        "--at",
        "1",
        "--mode",
        "exact",
        "--json",
    ]));
    assert_eq!(j["coefficients"], serde_json::json!(["1", "3", "3", "1"]));
}

#[test]
fn jet_in_float_mode_and_negative_base() {
    let j = json(&weil(&[
        "jet",
        "--expr",
        "exp(u0)",
        "--algebra",
        "x | x^3 ; nil 3",
        "--at",
        "-1",
        "--mode",
        "float",
        "--json",
    ]));
    let c: Vec<f64> =
        j["coefficients"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect();
    let e = (-1.0f64).exp();
    for (got, want) in c.iter().zip([e, e, e / 2.0]) {
        assert!((got - want).abs() <= 1e-15 * want);
    }
}

#[test]
fn exact_mode_refuses_irrational_values() {
    let o = weil(&["jet", "--expr", "exp(u0)", "--algebra", "x | x^2 ; nil 2", "--at", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_suite_json() {
    let o = weil(&["verify", "prop-3-3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["suite"], "prop-3-3");
    assert_eq!(j["checks"].as_array().unwrap().len(), 1);
    assert_eq!(j["checks"][0]["status"], "pass");
    assert_eq!(j["checks"][0]["details"]["dims"], serde_json::json!([3, 3]));
    assert!(j["duration_ms"].is_u64());
}

#[test]
fn verify_unknown_suite_exits_with_two() {
    let o = weil(&["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn verify_table_lists_every_check() {
    let o = weil(&["verify", "thm-6-6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("euclidean/n4"));
    assert!(text.contains("15/15 checks passed"));
}

#[test]
fn seed_is_read_from_the_environment() {
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_weil"))
            .args(["verify", "jets", "--json"])
            .env("WEIL_VERIFY_SEED", seed)
            .output()
            .unwrap();
        assert!(o.status.success());
        let mut j = json(&o);
        j.as_object_mut().unwrap().remove("duration_ms");
        j
    };
    assert_eq!(run("11"), run("11"));
}
