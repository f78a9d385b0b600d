use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "\
[SYSTEM]
n = 1
A = 1
B = 1
input_lo = -1
input_hi = 1
x0 = 0
horizon = 12

[SPEC]
G[0,12] x1 <= 9 & G[0,6] F[0,2] x1 >= 0 & F[2,9] G[0,3] x1 >= 2.5

[SPLIT]
kappas = 0, 5, 12
taus = default
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stlsplit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn parse_prints_the_canonical_formula() {
    let o = run(&["parse", "--formula", "G[0,5] (x1 >= 0 & F(0,3) x2 <= 1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "G[0,5] (x1 >= 0 & F[1,2] x2 <= 1)");
}

#[test]
fn parse_errors_exit_with_two() {
    let o = run(&["parse", "--formula", "F[5,2] x1 >= 0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty interval"));
    assert_eq!(run(&["parse"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn check_reports_the_verdict_in_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.csv", "k,x1\n0,1\n1,2\n2,0.5\n");
    let bad = write(dir.path(), "bad.csv", "k,x1\n0,1\n1,-2\n2,0.5\n");
    let o = run(&["check", "--formula", "G[0,2] x1 >= 0", "--trace", &good]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["satisfied"], true);
    assert_eq!(v["robustness"], 0.5);
    assert_eq!(run(&["check", "--formula", "G[0,2] x1 >= 0", "--trace", &bad]).status.code(), Some(1));
    let short = run(&["check", "--formula", "G[0,5] x1 >= 0", "--trace", &good]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn separate_and_split_print_the_windows() {
    let o = run(&["separate", "--kappas", "15,30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("phi_t_2 = F[20,30] G[0,3] inbox(CHARGER)"), "{text}");
    let o = run(&["split"]);
    let text = stdout(&o);
    assert!(text.contains("phi_bar_t_2 = F[20,27] G[0,3] inbox(CHARGER)"), "{text}");
    assert!(text.contains("carry window 1 term 1: tau = 3, tail [12,15], head [15,17]"), "{text}");
    assert_eq!(run(&["split", "--taus", "9"]).status.code(), Some(2));
}

#[test]
fn modular_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "small.spec", SMALL);
    let out = dir.path().join("out");
    let o = run(&["modular", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 14);
    assert!(csv.starts_with("k,x1,u1\n0,0,"));
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["overall"], true);
    assert_eq!(verdict["target_window"], 2);
    let o = run(&["check", "--spec", &spec, "--trace", out.join("trajectory.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn synthesize_solves_the_whole_specification() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "small.spec", SMALL);
    let o = run(&["synthesize", "--spec", &spec, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("synthesis.json")).unwrap()).unwrap();
    assert_eq!(r["feasible"], true);
    assert!(dir.path().join("trajectory.csv").exists());
}

#[test]
fn casestudy_writes_the_46_state_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["casestudy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 47);
    let spec = fs::read_to_string(dir.path().join("scenario.spec")).unwrap();
    assert_eq!(
        stlsplit_core::parser::parse_scenario(&spec).unwrap(),
        stlsplit_core::casestudy::build_casestudy()
    );
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["final_verdict"], true);
    assert_eq!(summary["target_achieved_window"], 3);
}
