use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const LOOP_24: &str = r#"{"vertices":["v"],"edges":[{"id":"e","from":"v","to":"v","idx_at_from":"2","idx_at_to":"4"}]}"#;

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("eigtool-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> PathBuf {
    let p = scratch(name);
    fs::write(&p, body).unwrap();
    p
}

fn eigtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigtool"))
        .args(args)
        .output()
        .expect("eigtool runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn to_regular_writes_a_verifiable_certificate() {
    let g = write("loop24.json", LOOP_24);
    let cert = scratch("loop24.cert.json");
    let o = eigtool(&["commation", "to-regular", g.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let last = c["nodes"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["kind"], "regular_tree");
    assert_eq!(last["degree"], 6);

    let v = eigtool(&["commation", "verify", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("word ↗↖↗"));
}

#[test]
fn corrupted_certificate_exits_two() {
    let g = write("loop24-c.json", LOOP_24);
    let cert = scratch("loop24-c.cert.json");
    let o = eigtool(&["commation", "to-regular", g.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let n = c["nodes"].as_array().unwrap().len();
    c["nodes"][n - 1]["degree"] = 7.into();
    let bad = write("corrupted.cert.json", &c.to_string());
    let v = eigtool(&["commation", "verify", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(2));
    assert!(stdout(&v).contains("valid: false"));
}

#[test]
fn radius_and_diameter_certificates_verify() {
    let a = write("loop26.json", &LOOP_24.replace("\"4\"", "\"6\""));
    let b = write("loop35.json", &LOOP_24.replace("\"2\"", "\"3\"").replace("\"4\"", "\"5\""));
    let r = eigtool(&["commation", "radius", a.to_str().unwrap(), "--out", scratch("r.json").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    assert!(stdout(&r).contains("word ↗↖↗↖"));
    let d = eigtool(&[
        "commation",
        "diameter",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--out",
        scratch("d.json").to_str().unwrap(),
    ]);
    assert_eq!(d.status.code(), Some(0), "{}", stdout(&d));
    assert_eq!(eigtool(&["commation", "verify", scratch("d.json").to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn primes_outside_two_smooth_sums() {
    let o = eigtool(&["sieve", "primes-not-in", "--N", "2", "--count", "5", "--limit", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "7 11 13 19 23");
    let m = eigtool(&["sieve", "member", "--d", "2", "--N", "2", "17"]);
    assert_eq!(stdout(&m).trim(), "true");
}

#[test]
fn usage_and_validation_errors_exit_one() {
    assert_eq!(eigtool(&["nonsense"]).status.code(), Some(1));
    assert_eq!(eigtool(&["sieve", "member", "--d", "x"]).status.code(), Some(1));
    let zero = write("zero.json", &LOOP_24.replace("\"4\"", "\"0\""));
    let v = eigtool(&["eig", "validate", zero.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).starts_with("invalid"));
    let o = eigtool(&["rigidity", "obstruct", "--q", "11", "--r", "13", "--s", "17", "--N", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn obstruction_for_a_hypothesis_triple() {
    let o = eigtool(&["rigidity", "obstruct", "--q", "11", "--r", "13", "--s", "19", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chain factor 8/27 (contradiction: true)"));
    assert!(stdout(&o).contains("0 covers"));
}

#[test]
fn cover_sheets_then_check() {
    let g = write("loop24-s.json", LOOP_24);
    let map = scratch("sheets.json");
    let o = eigtool(&["cover", "sheets", g.to_str().unwrap(), "--k", "3", "--out", map.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(eigtool(&["cover", "check", map.to_str().unwrap()]).status.code(), Some(0));

    let mut m: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
    m["codomain"]["edges"][0]["idx_at_to"] = "5".into();
    let bad = write("sheets-bad.json", &m.to_string());
    assert_eq!(eigtool(&["cover", "check", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_twin_and_determinism() {
    let g = write("loop24-j.json", LOOP_24);
    let twin = scratch("ucover.json");
    let args = ["eig", "ucover", g.to_str().unwrap(), "--radius", "3", "--json-out", twin.to_str().unwrap()];
    let first = eigtool(&args);
    let second = eigtool(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let j: Value = serde_json::from_str(&fs::read_to_string(&twin).unwrap()).unwrap();
    assert_eq!(j["recognition"]["Regular"], 6);
}

#[test]
fn classification_and_family() {
    let c = eigtool(&["rigidity", "classify", "--q", "11", "--r", "13", "--s", "17", "--max-vertices", "6", "--jobs", "2"]);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).contains("cycle lengths {3, 6}"));
    let twin = scratch("g24.json");
    let f = eigtool(&["rigidity", "g24", "--k", "3", "--out", scratch("g24-graph.json").to_str().unwrap(), "--json-out", twin.to_str().unwrap()]);
    assert_eq!(f.status.code(), Some(0));
    assert!(stdout(&f).contains("Regular(11)"));
}

#[test]
fn moves_and_reductions() {
    let g = write("loop24-m.json", LOOP_24);
    let o = eigtool(&["eig", "move", g.to_str().unwrap(), "--params", r#"{"move":"standard_blow_up","edge":"e","new_edge":"f"}"#]);
    assert_eq!(o.status.code(), Some(0));
    let h: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(h["edges"].as_array().unwrap().len(), 2);
    let r = eigtool(&["eig", "reduce", g.to_str().unwrap(), "--essential"]);
    assert_eq!(r.status.code(), Some(0));
    let m = eigtool(&["eig", "modular", g.to_str().unwrap()]);
    assert!(stdout(&m).contains("unimodular: false"));
}
