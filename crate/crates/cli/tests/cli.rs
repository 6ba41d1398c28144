use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", &format!("{name}.json")]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assumekit"))
        .args(args)
        .env_remove("ASSUMEKIT_SEED")
        .output()
        .expect("binary runs")
}

/// Runs a command expected to succeed and returns its report.
fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

/// Runs a command expected to fail with `code`; stdout must stay empty.
fn fails(args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
    assert!(!out.stderr.is_empty());
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn edge_list(v: &Value) -> Vec<(String, String)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_str().unwrap().into(), e[1].as_str().unwrap().into()))
        .collect()
}

#[test]
fn solve_examples() {
    let r = ok(&["solve", &fixture("buchi_loop")]);
    assert_eq!(r["result"]["kind"], "sure");
    assert!(strings(&r["result"]["win1"]).is_empty());
    assert_eq!(strings(&r["result"]["win2"]), ["a", "b"]);

    let r = ok(&["solve", &fixture("coin")]);
    assert_eq!(strings(&r["result"]["almost_sure"]), ["v", "w", "x"]);

    let r = ok(&["solve", &fixture("coin_abs")]);
    assert_eq!(strings(&r["result"]["almost_sure"]), ["g"]);
}

#[test]
fn solve_objective_override_and_dot() {
    let f = fixture("buchi_loop");
    let r = ok(&["solve", &f, "--objective", "reach:a"]);
    assert_eq!(strings(&r["result"]["win1"]), ["a"]);
    let r = ok(&["solve", &f, "--objective", "safe:b"]);
    assert!(strings(&r["result"]["win1"]).is_empty());
    let r = ok(&["solve", &f, "--dot"]);
    assert!(r["result"]["dot"].as_str().unwrap().starts_with("digraph"));
    fails(&["solve", &f, "--objective", "reach:zz"], 2);
    fails(&["solve", &f, "--objective", "muller:a"], 2);
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    fails(&["solve", empty.to_str().unwrap()], 2);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"states\": [").unwrap();
    fails(&["solve", junk.to_str().unwrap()], 2);
    fails(&["solve", dir.path().join("missing.json").to_str().unwrap()], 2);
    fails(&["frobnicate"], 2);
}

#[test]
fn assume_safety_and_fair() {
    let r = ok(&["assume", &fixture("safety_escape"), "--mode", "safety"]);
    assert_eq!(edge_list(&r["result"]["forbidden"]), [("b".into(), "c".into())]);

    let r = ok(&["assume", &fixture("buchi_loop"), "--mode", "fair", "--state", "a"]);
    assert_eq!(edge_list(&r["result"]["fair"]), [("b".into(), "a".into())]);

    // Not live from `a`: only the escape to `c` is left after one step.
    fails(&["assume", &fixture("pipe"), "--mode", "fair", "--state", "a"], 5);
    fails(&["assume", &fixture("buchi_loop"), "--mode", "fair", "--state", "q"], 2);
}

#[test]
fn assume_combined_writes_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let aut = dir.path().join("rcg_aut.json");
    let r = ok(&[
        "assume",
        &fixture("rcg"),
        "--mode",
        "combined",
        "--out",
        aut.to_str().unwrap(),
    ]);
    let res = &r["result"];
    assert_eq!(res["empty"], false);
    assert!(!edge_list(&res["fair"]).is_empty());
    assert!(res["witness_word"].is_string());
    assert!(res["environment"]["states"].as_array().is_some());
    let text = std::fs::read_to_string(&aut).unwrap();
    let file: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(file, res["automaton"]);

    let a = aut.to_str().unwrap();
    assert_eq!(ok(&["member", a, "--word", "|{}"])["result"]["accepted"], true);
    assert_eq!(ok(&["member", a, "--word", "{req}|{cancel}"])["result"]["accepted"], false);
    fails(&["member", a, "--word", "{req"], 2);
    fails(&["member", a, "--word", "{}|"], 2);
    fails(&["member", a, "--word", "|{bogus}"], 2);

    // A plain game has no inputs or outputs.
    fails(&["assume", &fixture("buchi_loop"), "--mode", "combined"], 2);
}

#[test]
fn check_answers_yes_and_no() {
    let f = fixture("buchi_loop");
    let r = ok(&["check", &f, "--fair-edges", "b->a", "--state", "a"]);
    assert_eq!(r["result"]["sufficient"], "yes");
    let r = ok(&["check", &f, "--fair-edges", "", "--state", "a"]);
    assert_eq!(r["result"]["sufficient"], "no");
    fails(&["check", &f, "--fair-edges", "a->a", "--state", "a"], 2);
    fails(&["check", &f, "--fair-edges", "b->zz", "--state", "a"], 2);
    fails(&["check", &f, "--fair-edges", "a->b", "--state", "a"], 2);
}

#[test]
fn gen_three_sat() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("x1.cnf");
    std::fs::write(&cnf, "p cnf 1 1\n1 0\n").unwrap();
    let out = dir.path().join("x1.json");
    let r = ok(&[
        "gen",
        "--three-sat",
        cnf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r["result"]["states"], 10);
    assert_eq!(r["result"]["k"], 1);
    assert_eq!(r["result"]["initial"], "11");
    let solved = ok(&["check", out.to_str().unwrap(), "--fair-edges", "l1->B", "--state", "11"]);
    assert_eq!(solved["result"]["sufficient"], "yes");

    let bad = dir.path().join("bad.cnf");
    std::fs::write(&bad, "p cnf 1 1\n2 0\n").unwrap();
    fails(&["gen", "--three-sat", bad.to_str().unwrap()], 2);
}

#[test]
fn gen_random_is_seeded() {
    let spec = "states=5,density=0.4,priorities=3,prob=0.2";
    let a = ok(&["gen", "--random", spec, "--seed", "7"]);
    let b = ok(&["gen", "--random", spec, "--seed", "7"]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["seed"], 7);
    let c = ok(&["gen", "--random", spec, "--seed", "8"]);
    assert_ne!(a["result"]["game"], c["result"]["game"]);

    let env = Command::new(env!("CARGO_BIN_EXE_assumekit"))
        .args(["gen", "--random", spec])
        .env("ASSUMEKIT_SEED", "7")
        .output()
        .unwrap();
    let env: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(env["result"], a["result"]);

    fails(&["gen", "--random", "states=0"], 2);
    fails(&["gen", "--random", "colour=red"], 2);
    fails(&["gen", "--fixture", "nope"], 2);
    fails(&["gen"], 2);
}

#[test]
fn gen_fixture_round_trips() {
    let r = ok(&["gen", "--fixture", "rcg"]);
    assert_eq!(r["result"]["states"], 28);
    let text = std::fs::read_to_string(fixture("rcg")).unwrap();
    let file: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["result"]["game"], file);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let aut = dir.path().join("a.json");
    let runs: Vec<Vec<String>> = vec![
        vec!["solve".into(), fixture("coin")],
        vec!["assume".into(), fixture("rcg"), "--mode".into(), "combined".into(), "--out".into(), aut.to_str().unwrap().into()],
        vec!["check".into(), fixture("pipe"), "--fair-edges".into(), "b->a".into(), "--state".into(), "b".into()],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut a = ok(&args);
        let mut b = ok(&args);
        assert!(a["timing_ms"].is_u64());
        a.as_object_mut().unwrap().remove("timing_ms");
        b.as_object_mut().unwrap().remove("timing_ms");
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a["input_digest"].as_str().unwrap().len(), 64);
    }
}
