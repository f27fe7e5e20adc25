use std::process::Command;

use domino2adic::cli::record::ResultRecord;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_domino2adic"));
    c.env_remove(domino2adic::cli::CACHE_ENV);
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn records(stdout: &str) -> Vec<ResultRecord> {
    stdout
        .lines()
        .map(|l| serde_json::from_str(l).expect("json record"))
        .collect()
}

#[test]
fn fmod_json_is_exact() {
    let (code, out, _) = run(&["fmod", "--n", "3", "--bits", "4", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"n\":3,\"f_mod\":{\"residue\":\"13\",\"precision\":4}}\n");
}

#[test]
fn fmod_accepts_negative_n() {
    let (code, out, _) = run(&["fmod", "--n", "-2", "--bits", "6", "--format", "json"]);
    assert_eq!(code, 0);
    // f(-2) = -f(1) = -1
    assert_eq!(records(&out)[0].f_mod.as_ref().unwrap().residue, "63");
    let (code, _, err) = run(&["fmod", "--n", "-2", "--bits", "6", "--method", "direct"]);
    assert_eq!(code, 1);
    assert!(err.contains("usage error"));
}

#[test]
fn count_zero() {
    let (code, out, _) = run(&["count", "--n", "0", "--format", "json"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r.count.as_deref(), Some("1"));
    assert_eq!(r.two_exponent, Some(0));
    assert_eq!(r.f.as_deref(), Some("1"));
}

#[test]
fn f_cross_checks_methods() {
    let (code, out, _) = run(&["f", "--n", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r.f.as_deref(), Some("89893"));
    assert_eq!(r.checks["dp_matches_cyclo"], true);
    assert_eq!(r.data["method"], "dp+cyclo");
}

#[test]
fn functional_sweep_has_expected_sign_pattern() {
    let (code, out, _) = run(&["verify", "functional", "--n-max", "20", "--bits", "8", "--format", "json"]);
    assert_eq!(code, 0);
    let rows = records(&out);
    assert_eq!(rows.len(), 21);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.n, i as i64);
        assert!(r.checks["functional_equation"]);
        let expected = if matches!(i % 4, 0 | 3) { "1" } else { "-1" };
        assert_eq!(r.data["sign"], expected);
    }
}

#[test]
fn lemma_sweep_passes() {
    let (code, out, _) = run(&["verify", "lemmas", "--n-max", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let rows = records(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.checks.values().all(|&ok| ok)));
}

#[test]
fn exit_code_two_only_under_injected_faults() {
    let cases: &[(&[&str], &str)] = &[
        (&["count", "--n", "2"], "two-exponent"),
        (&["f", "--n", "3"], "f-cross"),
        (&["verify", "lemmas", "--n-max", "3"], "unit-product"),
        (&["verify", "lemmas", "--n-max", "3"], "pair-product-sign"),
        (&["verify", "lemmas", "--n-max", "3"], "cos-product-sign"),
        (&["verify", "lemmas", "--n-max", "3"], "full-product"),
        (&["verify", "functional", "--n-max", "3", "--bits", "6"], "functional"),
        (&["quasi", "fit", "--k", "2"], "reflection"),
    ];
    for (args, fault) in cases {
        let (clean, _, _) = run(args);
        assert_eq!(clean, 0, "{args:?} should pass untouched");
        let mut faulty = args.to_vec();
        faulty.extend(["--inject-fault", fault]);
        let (code, _, err) = run(&faulty);
        assert_eq!(code, 2, "{args:?} with {fault}");
        assert!(err.contains("check failed"), "{err}");
    }
}

#[test]
fn usage_and_budget_exit_codes() {
    assert_eq!(run(&["nonsense"]).0, 1);
    assert_eq!(run(&["fmod", "--n", "3"]).0, 1);
    assert_eq!(run(&["fmod", "--n", "3", "--bits", "1"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["count", "--n", "5", "--max-width", "8"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
    assert_eq!(run(&["verify", "lemmas", "--n-max", "17"]).0, 3);
    assert_eq!(run(&["f", "--n", "9", "--method", "cyclo", "--max-n", "8"]).0, 3);
}

#[test]
fn warm_and_cold_cache_emit_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("results.jsonl");
    let cache = cache.to_str().unwrap();
    let commands: &[&[&str]] = &[
        &["count", "--n", "4"],
        &["fmod", "--n", "-7", "--bits", "9"],
        &["verify", "lemmas", "--n-max", "5"],
        &["scan", "continuity", "--n-max", "20", "--bits", "4"],
        &["uk", "--k", "3", "--n", "6"],
        &["quasi", "fit", "--k", "2"],
    ];
    for format in ["json", "csv", "text"] {
        for args in commands {
            let mut a = args.to_vec();
            a.extend(["--format", format]);
            let uncached = run(&a);
            a.extend(["--cache", cache]);
            let cold = run(&a);
            let warm = run(&a);
            assert_eq!(uncached, cold, "{a:?}");
            assert_eq!(cold, warm, "{a:?}");
        }
    }
    let lines = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    // Each key is written once; later runs are pure hits.
    assert_eq!(lines.lines().count(), 1 + 1 + 5 + 4 + 1 + 1);
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.jsonl");
    let status = bin()
        .args(["fmod", "--n", "5", "--bits", "7"])
        .env(domino2adic::cli::CACHE_ENV, &cache)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(std::fs::read_to_string(&cache).unwrap().contains("\"fmod\""));
}

#[test]
fn stale_cache_entries_are_overridden_by_newer_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let old = r#"{"key":{"command":"fmod","n":3,"bits":4},"record":{"n":3,"f_mod":{"residue":"1","precision":4}}}"#;
    let new = r#"{"key":{"command":"fmod","n":3,"bits":4},"record":{"n":3,"f_mod":{"residue":"13","precision":4}}}"#;
    std::fs::write(&cache, format!("{old}\n{new}\n")).unwrap();
    let (_, out, _) = run(&["fmod", "--n", "3", "--bits", "4", "--format", "json", "--cache", cache.to_str().unwrap()]);
    assert_eq!(records(&out)[0].f_mod.as_ref().unwrap().residue, "13");
}

#[test]
fn emitted_json_round_trips_byte_identically() {
    let (_, out, _) = run(&["verify", "lemmas", "--n-max", "4", "--format", "json"]);
    for line in out.lines() {
        let r: ResultRecord = serde_json::from_str(line).unwrap();
        assert_eq!(r.to_json(), line);
    }
}

#[test]
fn uk_and_quasi_fit_output() {
    let (code, out, _) = run(&["uk", "--k", "2", "--n", "1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(records(&out)[0].data["u"], "9/4");
    let (code, out, _) = run(&["quasi", "fit", "--k", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r.data["even_part"], "[]");
    assert_eq!(r.data["sign_part"], "[1/2, 1]");
    assert!(r.checks["reflection"] && r.checks["held_out_exact"]);
}
