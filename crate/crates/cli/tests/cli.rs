use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn atembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atembed"))
        .args(args)
        .env_remove("ATEMBED_FUEL")
        .output()
        .expect("binary runs")
}

fn run_on(sub: &str, file: &str, rest: &[&str]) -> Output {
    let path = data(file);
    let mut args = vec![sub, path.to_str().unwrap()];
    args.extend_from_slice(rest);
    atembed(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn typecheck_prints_the_type() {
    let o = run_on("typecheck", "id.ipc", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "X -> X");
    let o = run_on("typecheck", "poly.fat", &["--calculus", "fat"]);
    assert_eq!(stdout(&o).trim(), "X");
}

#[test]
fn translate_prints_an_fat_term() {
    let o = run_on("translate", "id.ipc", &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let t = atomic_embed::syntax::parse_fat(text.trim()).unwrap();
    assert_eq!(
        atomic_embed::fat::typecheck_fat(&Default::default(), &t).map(|ty| ty.to_string()),
        Ok("X -> X".to_string())
    );
}

#[test]
fn translate_output_is_a_valid_fat_file() {
    for kind in ["optimized", "baseline"] {
        let o = run_on("translate", "case_case.ipc", &["--kind", kind]);
        assert_eq!(o.status.code(), Some(0));
        let (ctx, t) = atomic_embed::syntax::parse_fat_file(&stdout(&o)).unwrap();
        assert_eq!(
            atomic_embed::fat::typecheck_fat(&ctx, &t).map(|ty| ty.to_string()),
            Ok("X".to_string())
        );
    }
}

#[test]
fn reduce_in_both_calculi() {
    let o = run_on("reduce", "beta.ipc", &["--rule", "beta-imp"]);
    assert_eq!(stdout(&o).trim(), "y");
    let o = run_on("reduce", "beta.ipc", &["--rule", "beta-imp", "--pos", "root"]);
    assert_eq!(stdout(&o).trim(), "y");
    let o = run_on("reduce", "poly.fat", &["--rule", "beta-all"]);
    assert_eq!(stdout(&o).trim(), "(\\y:X. y) a");
    let o = run_on("reduce", "beta.ipc", &["--rule", "pi-or"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn normalize_respects_fuel() {
    let o = run_on("normalize", "poly.fat", &["--fuel", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a");
    let o = run_on("normalize", "poly.fat", &["--fuel", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_atembed"))
        .args(["normalize", data("poly.fat").to_str().unwrap()])
        .env("ATEMBED_FUEL", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = run_on("normalize", "beta.ipc", &["--calculus", "ipc"]);
    assert_eq!(stdout(&o).trim(), "y");
}

fn verdict_kinds(o: &Output) -> Vec<String> {
    let v: Value = serde_json::from_str(&stdout(o)).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| r["verdict"]["kind"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn simcheck_reports_identity_for_commuting_conversions() {
    let o = run_on("simcheck", "abort_app.ipc", &["--rule", "varpi-imp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(verdict_kinds(&o), ["syntactic-identity"]);
    let o = run_on("simcheck", "case_case.ipc", &["--rule", "pi-or"]);
    assert_eq!(verdict_kinds(&o), ["syntactic-identity"]);
}

#[test]
fn simcheck_on_the_substitution_counterexample() {
    // Substituting an abstraction for a variable branch leaves one extra β
    // redex behind, so the step is simulated by two β steps, not one.
    let o = run_on("simcheck", "subst_counterexample.ipc", &["--rule", "beta-imp"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v[0];
    assert_eq!(r["verdict"]["kind"], "reached-in");
    assert_eq!(r["verdict"]["class"], "beta");
    assert_eq!(r["verdict"]["steps"], 2);
    assert_eq!(r["trace"].as_array().unwrap().len(), 2);
}

#[test]
fn simcheck_without_redex_is_a_usage_error() {
    let o = run_on("simcheck", "id.ipc", &["--rule", "beta-imp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(run_on("typecheck", "ill_typed.ipc", &[]).status.code(), Some(1));
    let o = run_on("typecheck", "bad_syntax.ipc", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:1"));
    assert_eq!(run_on("typecheck", "missing.ipc", &[]).status.code(), Some(2));
    assert_eq!(run_on("reduce", "beta.ipc", &["--rule", "nope"]).status.code(), Some(2));
    assert_eq!(atembed(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = atembed(&["fuzz", "--seed", "42", "--samples", "1000", "--report", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read_to_string(&out).unwrap();
    let o2 = atembed(&["fuzz", "--seed", "42", "--samples", "1000"]);
    assert_eq!(stdout(&o2), written);

    let report: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["config"]["samples"], 1000);
    assert!(report["failures"].as_array().unwrap().is_empty());
    for (rule, c) in report["counts"].as_object().unwrap() {
        let n = |k: &str| c[k].as_u64().unwrap();
        assert_eq!(n("checked"), n("identity") + n("reached") + n("joined") + n("failed"), "{rule}");
        assert_eq!(n("failed"), 0, "{rule}");
    }
}
