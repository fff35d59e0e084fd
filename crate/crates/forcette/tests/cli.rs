//! End-to-end checks of the command-line surface: outputs, exit codes, and
//! byte-for-byte determinism across runs.

use std::path::Path;
use std::process::{Command, Output};

fn forcette(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forcette"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn force_prints_verdict_and_mirrors_exit_code() {
    let p3 = fixture("p3.poset");
    let names = fixture("corpus.names");
    let yes = forcette(&["force", &p3, &names, "n0 in n1", "--at", "a"]);
    assert_eq!(stdout(&yes), "true\n");
    assert_eq!(yes.status.code(), Some(0));
    let no = forcette(&["force", &p3, &names, "n0 in n1", "--at", "b"]);
    assert_eq!(stdout(&no), "false\n");
    assert_eq!(no.status.code(), Some(1));
    let negated = forcette(&["force", &p3, &names, "~(n0 in n1)", "--at", "b"]);
    assert_eq!(stdout(&negated), "true\n");
}

#[test]
fn complete_prints_carrier_and_morphism() {
    let out = forcette(&["complete", &fixture("c2.poset")]);
    let text = stdout(&out);
    assert!(text.contains("carrier: {} {1,p}"));
    assert!(text.contains("i 1 = {1,p}"));
    assert!(text.contains("i p = {1,p}"));
    assert!(text.contains("laws: pass"));
    assert!(text.contains("dense morphism: pass"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn boolval_supval_and_bridge() {
    let p3 = fixture("p3.poset");
    let names = fixture("corpus.names");
    let bv = forcette(&["boolval", &p3, &names, "n1 = n2"]);
    assert_eq!(stdout(&bv), "{a}\n");
    let sv = forcette(&["supval", &p3, &names, "n0 in n1"]);
    assert_eq!(stdout(&sv), "{a}\n");
    let br = forcette(&["bridge", &p3, &names, "n1 = n2", "--at", "a"]);
    let text = stdout(&br);
    assert!(text.contains("poset-side true"));
    assert!(text.contains("algebra-side true"));
    assert!(text.ends_with("PASS\n"));
    assert_eq!(br.status.code(), Some(0));
}

#[test]
fn generic_extend_and_truth_check() {
    let p3 = fixture("p3.poset");
    let names = fixture("corpus.names");
    let gen = forcette(&["generic", &p3]);
    assert_eq!(stdout(&gen), "{1,a}\n{1,b}\n");
    let ext = forcette(&["extend", &p3, &names, "--filter", "1,a"]);
    assert_eq!(stdout(&ext), "{}\n{{}}\n");
    let truth = forcette(&["truth-check", &p3, &names, "n0 in n3"]);
    assert!(stdout(&truth).starts_with("PASS"));
    assert_eq!(truth.status.code(), Some(0));
}

#[test]
fn topology_sheaf_check_and_induced() {
    let p3 = fixture("p3.poset");
    let dense = forcette(&["topology", &p3, "--kind", "dense"]);
    assert_eq!(
        stdout(&dense),
        "covers 1: {a,b} {1,a,b}\ncovers a: {a}\ncovers b: {b}\n"
    );
    let sup = forcette(&["topology", &p3, "--kind", "sup"]);
    assert!(stdout(&sup).contains("covers {1,a,b}: {{},{a},{b}} {{},{a},{b},{1,a,b}}"));

    let ok = forcette(&["sheaf-check", &p3, &fixture("product.presheaf"), "--kind", "dense"]);
    assert_eq!(stdout(&ok), "SHEAF\n");
    assert_eq!(ok.status.code(), Some(0));
    let bad = forcette(&["sheaf-check", &p3, &fixture("skinny.presheaf"), "--kind", "dense"]);
    assert!(stdout(&bad).starts_with("NOT A SHEAF"));
    assert!(stdout(&bad).contains("matching family"));
    assert_eq!(bad.status.code(), Some(1));

    let ind = forcette(&["induced", &p3, "--target", "ro"]);
    assert!(stdout(&ind).ends_with("PASS\n"));
    assert_eq!(ind.status.code(), Some(0));
}

#[test]
fn crosscheck_suites_pass_on_fixtures() {
    let p3 = fixture("p3.poset");
    let names = fixture("corpus.names");
    for suite in ["bridge", "boolval", "truth", "filters", "topology", "equiv", "retraction"] {
        let out = forcette(&[
            "crosscheck", "--suite", suite, "--poset", &p3, "--names", &names, "--depth", "1",
        ]);
        let text = stdout(&out);
        assert!(
            text.lines().last().unwrap().ends_with("0 failed"),
            "suite {suite}: {text}"
        );
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
    }
}

#[test]
fn crosscheck_empty_names_file_gives_zero_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.names");
    std::fs::write(&empty, "").unwrap();
    let out = forcette(&[
        "crosscheck",
        "--suite",
        "boolval",
        "--poset",
        &fixture("p3.poset"),
        "--names",
        empty.to_str().unwrap(),
        "--depth",
        "0",
    ]);
    assert_eq!(stdout(&out), "SUMMARY boolval: 0 cases, 0 failed\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn error_paths_use_documented_exit_codes() {
    // usage error
    let usage = forcette(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));
    // file parse error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poset");
    std::fs::write(&bad, "poset X\nelements a\ntop z\n").unwrap();
    let parse = forcette(&["generic", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));
    // unknown suite
    let suite = forcette(&["crosscheck", "--suite", "nope", "--poset", &fixture("p3.poset")]);
    assert_eq!(suite.status.code(), Some(2));
    // semantic error: a non-filter passed to extend
    let sem = forcette(&[
        "extend",
        &fixture("p3.poset"),
        &fixture("corpus.names"),
        "--filter",
        "a,b",
    ]);
    assert_eq!(sem.status.code(), Some(3));
    // semantic error: enumeration cap exceeded
    let cap = forcette(&[
        "force",
        &fixture("p3.poset"),
        &fixture("corpus.names"),
        "n0 = n0",
        "--at",
        "a",
        "--rank",
        "3",
    ]);
    assert_eq!(cap.status.code(), Some(3));
    // formula parse error carries position
    let f = forcette(&["force", &fixture("p3.poset"), &fixture("corpus.names"), "n0 in", "--at", "a"]);
    assert_eq!(f.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let p3 = fixture("p3.poset");
    let names = fixture("corpus.names");
    for args in [
        vec!["complete", p3.as_str()],
        vec!["topology", p3.as_str(), "--kind", "sup"],
        vec!["crosscheck", "--suite", "bridge", "--poset", p3.as_str(), "--names", names.as_str(), "--depth", "1"],
        vec!["crosscheck", "--suite", "equiv", "--poset", p3.as_str()],
    ] {
        let first = forcette(&args);
        let second = forcette(&args);
        assert_eq!(first.stdout, second.stdout, "nondeterministic: {args:?}");
    }
}
