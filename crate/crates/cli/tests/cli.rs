use std::path::Path;
use std::process::{Command, Output};

fn weil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_dual_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dual.json", r#"{"variables":["x"],"relations":["x^2"],"nilpotency":2}"#);
    let o = weil(&["check", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 2, basis [1, x]"), "{}", stdout(&o));
}

#[test]
fn check_cusp_reports_computed_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cusp.toml", "variables = [\"x\", \"y\"]\nrelations = [\"x^2 - y^3\"]\nnilpotency = 4\n");
    let o = weil(&["check", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dimension 7,"), "{}", stdout(&o));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let improper = write(dir.path(), "bad.json", r#"{"variables":["x"],"relations":["x - 1"],"nilpotency":2}"#);
    assert_eq!(weil(&["check", &improper]).status.code(), Some(3));
    let garbled = write(dir.path(), "garbled.json", r#"{"variables":["x"],"relations":["x^^2"],"nilpotency":2}"#);
    assert_eq!(weil(&["check", &garbled]).status.code(), Some(2));
    assert_eq!(weil(&["check", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(weil(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn derive_rows() {
    let o = weil(&["derive", "--order", "3", "--expr", "exp(t)", "--at", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t1\n1\t1\n2\t1\n3\t1\n");
    let o = weil(&["derive", "--order", "2", "--expr", "t^2", "--at", "3"]);
    assert_eq!(stdout(&o), "0\t9\n1\t6\n2\t2\n");
}

#[test]
fn derive_real_mode_and_guards() {
    let o = weil(&["derive", "--order", "1", "--expr", "sin(t)", "--at", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<f64> = stdout(&o).lines().map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert!((rows[0] - 1f64.sin()).abs() < 1e-15 && (rows[1] - 1f64.cos()).abs() < 1e-15);
    let o = weil(&["derive", "--order", "2", "--expr", "log(t)", "--at", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("log"));
    assert_eq!(weil(&["derive", "--order", "13", "--expr", "t", "--at", "0"]).status.code(), Some(2));
    assert_eq!(weil(&["derive", "--order", "2", "--expr", "t +* 1", "--at", "0"]).status.code(), Some(2));
}

#[test]
fn lift_through_presets_and_files() {
    let o = weil(&["lift", "--algebra", "dual", "--expr", "t^3", "--at", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "f0 = 8/1 + 12/1*x");
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j2.json", r#"{"variables":["e"],"relations":["e^3"],"nilpotency":3}"#);
    let o = weil(&["lift", "--algebra", &f, "--expr", "1/t", "--at", "2"]);
    assert_eq!(stdout(&o).trim(), "f0 = 1/2 + -1/4*e + 1/8*e^2");
    assert_eq!(weil(&["lift", "--algebra", "nope", "--expr", "t", "--at", "0"]).status.code(), Some(2));
}

#[test]
fn equiv_answers() {
    let o = weil(&["equiv", "--algebra", "jet2", "--f", "sin(t)", "--g", "t - t^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "equivalent");
    let o = weil(&["equiv", "--algebra", "jet3", "--f", "t^3", "--g", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("component 0"));
}

#[test]
fn verify_empty_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"suites": [], "seed": 3}"#);
    let out = dir.path().join("empty_report.json");
    let o = weil(&["verify", "--config", &empty, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["suites"].as_array().unwrap().len(), 0);

    let cfg = write(
        dir.path(),
        "small.toml",
        "suites = [\"ring_laws\", \"conjecture_probe\"]\nseed = 9\ncases = 20\ndegree_bound = 2\n",
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(weil(&["verify", "--config", &cfg, "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(weil(&["verify", "--config", &cfg, "--out", b.to_str().unwrap()]).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let report: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    for key in ["version", "seed", "suites", "wall_ms"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let probe = &report["suites"][1];
    assert!(["evidence-for", "counterexample"].contains(&probe["outcome"].as_str().unwrap()));

    let c = dir.path().join("c.json");
    weil(&["verify", "--config", &cfg, "--out", c.to_str().unwrap(), "--seed", "10"]);
    assert_ne!(std::fs::read(&c).unwrap(), ta);
}

#[test]
fn verify_config_errors_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"suites": ["nope"]}"#);
    let out = dir.path().join("r.json");
    assert_eq!(weil(&["verify", "--config", &bad, "--out", out.to_str().unwrap()]).status.code(), Some(2));
    let ok = write(dir.path(), "ok.json", r#"{"suites": ["ring_laws"]}"#);
    let o = weil(&["verify", "--config", &ok, "--replay", "ring_laws/dual:12345"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"case_seed\"") || stdout(&o).contains("\"failures\": 0"));
    assert_eq!(weil(&["verify", "--config", &ok, "--replay", "garbage"]).status.code(), Some(2));
}
