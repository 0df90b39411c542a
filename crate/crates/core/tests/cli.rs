use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sumrace::cli::{cmd_build, cmd_race, CliError};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumrace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn sumrace")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"n":2,"H":2,"theta":"1","m":[[1,0]]}"#,
    );
    let out = dir.path().join("out.json").to_string_lossy().into_owned();
    let o = run(&["build", &spec, &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["params"]["delta"], "1/64");
    assert_eq!(doc["params"]["epsilon"], "1/4");
    assert_eq!(doc["ell"], serde_json::json!([[1, 0], [2, 0]]));
    assert_eq!(doc["sets"].as_array().unwrap().len(), 2);
    let report = doc["report"].as_array().unwrap();
    assert_eq!(report.len(), 2);
    assert!(report.iter().all(|e| e["pass"] == true));
    assert_eq!(report[0]["computed"], "1");
    // Endpoints are strings, never floats.
    assert!(doc["sets"][0][0][0].is_string());

    let o = run(&["verify", &out, &spec]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8_lossy(&o.stdout);
    assert_eq!(table.matches("pass").count(), 2);
}

#[test]
fn build_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json").to_string_lossy().into_owned();
    let h1 = write(
        dir.path(),
        "h1.json",
        r#"{"n":2,"H":1,"theta":"1","m":[[1]]}"#,
    );
    assert_eq!(code(&run(&["build", &h1, &out])), 2);
    let t0 = write(
        dir.path(),
        "t0.json",
        r#"{"n":2,"H":2,"theta":"0","m":[[1,0]]}"#,
    );
    assert_eq!(code(&run(&["build", &t0, &out])), 2);
    let junk = write(dir.path(), "junk.json", "{not json");
    assert_eq!(code(&run(&["build", &junk, &out])), 2);
    let missing = dir.path().join("nope.json").to_string_lossy().into_owned();
    assert_eq!(code(&run(&["build", &missing, &out])), 1);
}

#[test]
fn verify_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"n":3,"H":2,"theta":"3/7","m":[[2,-1],[-3,4]]}"#,
    );
    let out = dir.path().join("out.json");
    cmd_build(Path::new(&spec), &out, &mut Vec::new()).unwrap();

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    // Stretch the last part of A_2.
    let parts = doc["sets"][1].as_array_mut().unwrap();
    let last = parts.last_mut().unwrap();
    let hi: sumrace::Rational = last[1].as_str().unwrap().parse().unwrap();
    last[1] = Value::String((hi + sumrace::Rational::from_integer(1)).to_string());
    let tampered = write(dir.path(), "tampered.json", &doc.to_string());

    let o = run(&["verify", &tampered, &spec]);
    assert_eq!(code(&o), 3);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAIL"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failing rows"));

    let wrong_n = write(
        dir.path(),
        "n2.json",
        r#"{"n":2,"H":2,"theta":"3/7","m":[[2,-1]]}"#,
    );
    assert_eq!(code(&run(&["verify", out.to_str().unwrap(), &wrong_n])), 2);
}

#[test]
fn race_codes() {
    let dir = tempfile::tempdir().unwrap();
    let targets = write(dir.path(), "t.json", r#"{"targets":[[1,2],[2,1]]}"#);
    let out = dir.path().join("race.json").to_string_lossy().into_owned();
    let o = run(&["race", &targets, &out, "--ground", "12", "--maxsize", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        doc["witness"],
        serde_json::json!([[0, 1, 3, 7], [0, 1, 2, 3, 4]])
    );
    assert_eq!(doc["eta"], "1/3");

    let o = run(&["race", &targets, &out, "--ground", "2", "--maxsize", "2"]);
    assert_eq!(code(&o), 4);

    let trivial = write(dir.path(), "one.json", "[[1,1]]");
    let o = run(&["race", &trivial, &out]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["witness"], serde_json::json!([[0], [0]]));

    let bad = write(dir.path(), "bad.json", "[[1,3],[1,2]]");
    assert_eq!(code(&run(&["race", &bad, &out])), 2);
}

#[test]
fn race_exhaustion_is_not_a_crash() {
    let dir = tempfile::tempdir().unwrap();
    let targets = write(dir.path(), "t.json", "[[1,2],[2,1]]");
    let out = dir.path().join("race.json");
    let err = cmd_race(Path::new(&targets), &out, 2, 2, &mut Vec::new()).unwrap_err();
    assert!(matches!(err, CliError::Exhausted(_)));
    assert_eq!(err.code(), 4);
}

#[test]
fn plot_rows() {
    let dir = tempfile::tempdir().unwrap();
    let sets = write(
        dir.path(),
        "sets.json",
        r#"{"sets":[[["0","1"],["3","4"]],[["1/2","2"]]]}"#,
    );
    let svg = dir.path().join("p.svg").to_string_lossy().into_owned();
    let o = run(&["plot", &sets, &svg, "--hmax", "3"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches(r#"class="row""#).count(), 6);
    for label in ["A_1", "2A_1", "3A_1", "A_2", "2A_2", "3A_2"] {
        assert!(text.contains(&format!(">{label}</text>")), "{label}");
    }
    assert_eq!(text.matches("<g").count(), text.matches("</g>").count());

    let empty = write(dir.path(), "empty.json", r#"{"sets":[[]]}"#);
    let o = run(&["plot", &empty, &svg, "--hmax", "2"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="row""#).count(), 2);

    assert_eq!(code(&run(&["plot", &sets, &svg, "--hmax", "0"])), 2);
}

#[test]
fn oracle_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let sets = write(
        dir.path(),
        "sets.json",
        r#"{"sets":[[["0","7/8"]],[["1/3","5/3"],["2","9/4"]]]}"#,
    );
    let o = run(&["oracle", &sets, "--grid-step", "1/4"]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("A_1: inner 3/4 <= measure 7/8 <= outer 1 pass"));
    assert_eq!(code(&run(&["oracle", &sets, "--grid-step", "0"])), 2);
    assert_eq!(code(&run(&["oracle", &sets, "--grid-step", "abc"])), 2);
}
