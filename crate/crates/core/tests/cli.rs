use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdist")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = mdist(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn decide_on_itself_at_zero() {
    let f = fixture("figure1.fpres");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["decide", f, f, "--lambda", "0"]), (0, "yes\n".into(), String::new()));
}

#[test]
fn compute_two_points() {
    let (a, b) = (fixture("origin.fpres"), fixture("diagonal.fpres"));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let (code, out, _) = run(&["compute", a, b, "--seed", "17"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\nseed 17\n");
    let (_, out, _) = run(&["compute", a, b, "--decimal", "2"]);
    assert_eq!(out, "1\napprox 1.00\nseed 0\n");
    assert_eq!(run(&["decide", a, b, "--lambda", "1/2"]).0, 1);
}

#[test]
fn compute_is_reproducible() {
    let (a, b) = (fixture("figure1.fpres"), fixture("origin.fpres"));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let first = mdist(&["compute", a, b, "--seed", "5"]);
    let second = mdist(&["compute", a, b, "--seed", "5"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn bottleneck_and_sample() {
    let f = fixture("figure1.fpres");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["bottleneck", f, f, "--slice", "1,0"]).1, "0\n");
    let (a, b) = (fixture("origin.fpres"), fixture("diagonal.fpres"));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(run(&["bottleneck", a, b, "--slice", "1,0"]).1, "1\n");
    let (code, out, _) = run(&["sample", a, b, "--grid", "3x4", "--brange", "-2,2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "lower_bound\t1");
    assert_eq!(lines[1], "a\tb\td_B\tside");
    assert_eq!(lines.len(), 2 + 2 * 12);
    assert!(lines[2..].iter().all(|l| l.split('\t').count() == 4));
}

#[test]
fn validate_and_errors() {
    let f = fixture("figure1.fpres");
    let (code, out, _) = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "ok: field 2, 2 generators, 1 relations\n");

    let bad = fixture("bad_grade.fpres");
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));

    let f = f.to_str().unwrap();
    assert_eq!(run(&["validate", "/definitely/missing.fpres"]).0, 2);
    assert_eq!(run(&["decide", f, f, "--lambda", "abc"]).0, 2);
    assert_eq!(run(&["decide", f, f, "--lambda", "-1"]).0, 2);
    assert_eq!(run(&["bottleneck", f, f, "--slice", "3/2,0"]).0, 2);
    assert_eq!(run(&["sample", f, f, "--grid", "0x3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}
