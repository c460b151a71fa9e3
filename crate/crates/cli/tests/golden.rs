//! Byte-for-byte comparison against `tests/golden`. Set `UPDATE_GOLDEN=1`
//! to rewrite the files.

mod common;

use std::fs;

use common::{golden_path, invoke, render, CORPUS};
use sigma_cli::run;

#[test]
fn corpus_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for case in CORPUS {
        let out = invoke(case, None);
        assert_eq!(out.code, case.code, "{}: {}", case.name, out.stderr);
        let text = render(&out);
        let path = golden_path(case.name);
        if update {
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(&path, &text).unwrap();
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) if expected == text => {}
            _ => mismatched.push(case.name),
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}");
}

#[test]
fn emitted_certificates_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("tests/data/z2.grp", "a=1 b=-2", "a=2 b=-3"),
        ("tests/data/bs12.grp", "t=-1", "t=-3/2"),
        ("tests/data/f2z.grp", "a=1 b=1 t=1", "a=2 b=1/3 t=1/2"),
    ];
    for (i, (group, chi, other)) in cases.into_iter().enumerate() {
        let cert = dir.path().join(format!("cert{i}.json"));
        let cert = cert.to_str().unwrap();
        let out = run(["sigma", "--no-timing", "sigma1", group, "--char", chi, "--cert-out", cert]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let check = run(["sigma", "--no-timing", "verify-cert", cert, group, "--char", chi]);
        assert_eq!(check.code, 0, "{group} {chi}: {}", check.stdout);
        let check = run(["sigma", "--no-timing", "verify-cert", cert, group, "--char", other]);
        assert_eq!(check.code, 0, "{group} {other}: {}", check.stdout);
    }
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(["sigma", "sigma1"]).code, 3);
    assert_eq!(run(["sigma", "frobnicate"]).code, 3);
    assert_eq!(run(["sigma", "--threads", "0", "geom-check"]).code, 3);
    assert_eq!(run(["sigma", "--max-word-len", "0", "geom-check"]).code, 3);
    let help = run(["sigma", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("sigma1-cone"));
}

#[test]
fn timing_is_reported_unless_disabled() {
    let out = run(["sigma", "geom-check", "--samples", "5"]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(value["timing_ms"].is_u64());
    let out = run(["sigma", "--no-timing", "geom-check", "--samples", "5"]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(value.get("timing_ms").is_none());
}
