use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn gkat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).expect("temp file written");
    path.to_string_lossy().into_owned()
}

#[test]
fn flagship_programs_are_equivalent() {
    for (l, r) in [
        ("three-loops.gkat", "one-loop.gkat"),
        ("three-loops.kat", "one-loop.kat"),
    ] {
        let out = gkat(&["check", &fx(l), &fx(r), "--mode", "lang"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert_eq!(stdout(&out), "equivalent (lang)\n");
    }
}

#[test]
fn late_failure_is_not_bisimilar() {
    let out = gkat(&["check", &fx("p0.gkat"), &fx("zero.gkat"), "--mode", "bisim"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout(&out),
        "not equivalent (bisim)\nat {}: left steps with p, right rejects\n"
    );

    let out = gkat(&["check", &fx("p0.gkat"), &fx("zero.gkat")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_verdict_shape() {
    let out = gkat(&[
        "check",
        &fx("p0.gkat"),
        &fx("zero.gkat"),
        "--mode",
        "bisim",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["mode"], "bisim");
    assert_eq!(v["witness"]["trace"], serde_json::json!([]));
    assert_eq!(v["witness"]["divergence"]["kind"], "stepVsStop");
    assert_eq!(v["witness"]["divergence"]["stopped"], "right");

    let out = gkat(&[
        "check",
        &fx("intro-loop.gkat"),
        &fx("intro-unrolled.gkat"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"equivalent\":true,\"mode\":\"lang\"}\n");
}

#[test]
fn language_witness_names_a_guarded_string() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.gkat", "tests: b\nactions: p\nwhile b do p");
    let c = write(
        &dir,
        "c.gkat",
        "tests: b\nactions: p\nif b then p else skip",
    );
    let out = gkat(&["check", &a, &c]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("not equivalent (lang)\n"), "{text}");
    assert!(text.contains("guarded string {b} p {b}"), "{text}");
}

#[test]
fn inclusion_is_directional() {
    let zero = fx("zero.gkat");
    let p0 = fx("p0.gkat");
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.gkat", "tests:\nactions: p\np");
    assert_eq!(
        gkat(&["check", &zero, &p, "--mode", "incl"]).status.code(),
        Some(0)
    );
    let out = gkat(&["check", &p, &p0, "--mode", "incl"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("not included (incl)\n"));
}

#[test]
fn mixed_kinds_need_embedding() {
    let (l, r) = (fx("three-loops.gkat"), fx("one-loop.kat"));
    let out = gkat(&["check", &l, &r]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--via-embedding"));

    let out = gkat(&["check", &l, &r, "--via-embedding"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn universes_are_merged() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.gkat", "tests: b\nactions: p\nwhile b do p");
    let c = write(&dir, "c.gkat", "tests: c\nactions: q\nwhile c do q");
    let out = gkat(&["check", &a, &c, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equivalent"], false);
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.gkat", "tests: b\nactions: p\nwhile b do");
    let out = gkat(&["check", &bad, &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.gkat:3:"), "{}", stderr(&out));

    let undeclared = write(&dir, "u.gkat", "tests: b\nactions: p\nq");
    let out = gkat(&["lang", &undeclared]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("undeclared symbol `q`"));

    let out = gkat(&["check", &bad, "missing.gkat"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(gkat(&["check"]).status.code(), Some(2));
    assert_eq!(gkat(&["lang", "program.txt"]).status.code(), Some(2));
}

#[test]
fn too_many_tests_exit_3() {
    let dir = TempDir::new().unwrap();
    let names: Vec<String> = (0..13).map(|i| format!("t{i}")).collect();
    let big = write(
        &dir,
        "big.gkat",
        &format!("tests: {}\nactions: p\nwhile t0 do p", names.join(" ")),
    );
    let out = gkat(&["check", &big, &big]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("atom cap"));

    let out = gkat(&["--max-tests", "13", "check", &big, &big]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        gkat(&["--max-tests", "21", "check", &big, &big])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn skip_language_is_all_atoms() {
    let out = gkat(&["lang", &fx("skip.gkat"), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{}\n{b}\n{c}\n{b,c}\n");
}

#[test]
fn lang_is_sorted_by_length_then_lexicographically() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.kat", "tests: b\nactions: p q\n(q + p)*");
    let out = gkat(&["lang", &f, "--bound", "1"]);
    assert_eq!(
        stdout(&out),
        "{}\n{b}\n{} p {}\n{} p {b}\n{} q {}\n{} q {b}\n{b} p {}\n{b} p {b}\n{b} q {}\n{b} q {b}\n"
    );
    let out = gkat(&["lang", &f, "--bound", "0", "--format", "json"]);
    assert_eq!(stdout(&out), "[\"{}\",\"{b}\"]\n");
}

#[test]
fn infinite_loop_runs_to_empty_relation() {
    let out = gkat(&["run", &fx("while-1-p.gkat"), "--interp", &fx("interp.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "{}\n");
}

#[test]
fn run_prints_partial_function() {
    let out = gkat(&[
        "run",
        &fx("intro-loop.gkat"),
        "--interp",
        &fx("interp.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let map = v.as_object().unwrap();
    assert!(map.values().all(|t| t.is_string()));

    let dir = TempDir::new().unwrap();
    let interp = write(
        &dir,
        "bad.json",
        "{\"states\": [\"s\"], \"functional\": true, \"sigma\": {\"e\": [[\"s\", \"t\"]]}}",
    );
    let out = gkat(&["run", &fx("intro-loop.gkat"), "--interp", &interp]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_dot_has_both_p2_edges() {
    let out = gkat(&["dot", &fx("p2-cycle.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph automaton {"));
    assert!(dot.contains("q0 -> q1 [label=\"α|p2\"];"));
    assert!(dot.contains("q1 -> q0 [label=\"α|p2\"];"));
    assert!(dot.contains("q0 -> q0 [label=\"β|p1\"];"));
}

#[test]
fn program_automata_export() {
    let out = gkat(&["dot", &fx("p0.gkat"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 2);
    assert_eq!(v["states"][0]["label"], "p; fail");

    let out = gkat(&["dot", &fx("one-loop.kat")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("doublecircle"));

    let out = gkat(&["dot", &fx("one-loop.kat"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn laws_list_and_export() {
    let out = gkat(&["laws", "list", "--family", "gkat"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 15);
    assert!(text.contains("[unsound]"));

    let out = gkat(&["laws", "list", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let laws = v.as_array().unwrap();
    assert_eq!(laws.len(), 35);
    assert!(laws.iter().any(|l| l["id"] == "gkat.branch-idem"));
}

#[test]
fn laws_check_is_deterministic() {
    let args = [
        "laws",
        "check",
        "gkat.loop-unroll",
        "kat.star-unroll",
        "gkat.unique-fixpoint-unguarded",
        "--samples",
        "30",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = gkat(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert_eq!(first.stdout, gkat(&args).stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));

    let out = gkat(&["laws", "check", "no-such-law"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_output_is_deterministic() {
    let args = [
        "check",
        &fx("intro-loop.gkat"),
        &fx("p0.gkat"),
        "--via-embedding",
        "--format",
        "json",
    ]
    .map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let first = gkat(&args);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, gkat(&args).stdout);
}
