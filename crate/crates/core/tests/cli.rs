//! The command-line front end driven through `cli::run`.

use std::fs;

use origami_forge::cli::run;
use origami_forge::targeting::Certificate;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("origami-forge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn build_then_verify_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let svg = dir.path().join("out.svg");
    let (code, out, _) = call(&["build", "--stratum", "2,4,6", "--component", "odd", "--degree", "7"]);
    assert_eq!(code, 0);
    let c = Certificate::from_json(&out).unwrap();
    assert_eq!((c.stratum.to_string(), c.component.name(), c.degree), ("(2,4,6)".into(), "odd", 7));
    fs::write(&cert, &out).unwrap();

    let (code, out, _) = call(&["verify", "--in", cert.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["ok"], true);

    let (code, _, _) = call(&["render", "--in", cert.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn order_of_stratum_parts_is_irrelevant() {
    let a = call(&["build", "--stratum", "6,2,4", "--component", "odd", "--degree", "7"]);
    let b = call(&["build", "--stratum", "2,4,6", "--component", "odd", "--degree", "7"]);
    assert_eq!(a, b);
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let (_, out, _) = call(&["build", "--stratum", "4", "--component", "hyp", "--degree", "6"]);
    let mut v: Value = serde_json::from_str(&out).unwrap();
    v["component"] = "odd".into();
    fs::write(&cert, v.to_string()).unwrap();
    let (code, out, _) = call(&["verify", "--in", cert.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["ok"], false);
}

#[test]
fn classify_cycle_notation() {
    let (code, out, _) = call(&["classify", "--h", "(1,3,5)", "--v", "(1,2)(3,4)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 5);
    assert_eq!(v["stratum"], serde_json::json!([4]));
    assert_eq!(v["genus"], 3);
    assert_eq!(v["primitive"], true);
    assert_eq!(v["component"], "odd");
    assert_eq!(v["spin"], 1);
}

#[test]
fn census_file_resume_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census5.ndjson");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["census", "--degree", "5", "--out", p, "--jobs", "2", "--validate"]);
    assert_eq!(code, 0);
    let summary: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["entries"], 97);
    assert_eq!(summary["cross_validation"]["ok"], true);
    let first = fs::read_to_string(&path).unwrap();
    assert_eq!(first.lines().count(), 97);

    // A truncated file (with a torn last line) is completed on resume.
    let partial: String = first.lines().take(40).map(|l| format!("{}\n", l)).collect::<String>() + "{\"degr";
    fs::write(&path, partial).unwrap();
    let (code, _, _) = call(&["census", "--degree", "5", "--out", p, "--resume"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), first);

    let (code, out, _) = call(&["census", "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn census_guard() {
    let (code, _, err) = call(&["census", "--degree", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("guard"));
}

#[test]
fn haupt_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    fs::write(&chi, r#"{"genus":2,"a":[["1","0"],["1","0"]],"b":[["0","1"],["0","1"]]}"#).unwrap();
    let c = chi.to_str().unwrap();
    let (code, out, _) = call(&["haupt", "--character", c, "--stratum", "2"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["verdict"], "not_realizable");
    let (code, out, _) = call(&["haupt", "--character", c, "--stratum", "1,1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["verdict"].as_str(), v["degree"].as_u64()), (Some("realizable"), Some(2)));
    let (code, out, _) = call(&["haupt", "--character", c, "--stratum", "1,1", "--realize", "--component", "unique"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["certificate"]["degree"], 2);
    // Genus 2 character against a genus 4 stratum.
    let (code, _, _) = call(&["haupt", "--character", c, "--stratum", "1,2,3"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["build", "--stratum", "2,4,6", "--component", "bogus", "--degree", "7"]).0, 2);
    assert_eq!(call(&["build", "--stratum", "2,4,6", "--component", "hyp", "--degree", "7"]).0, 2);
    assert_eq!(call(&["build", "--stratum", "2,4,6", "--component", "odd", "--degree", "5"]).0, 2);
    assert_eq!(call(&["build", "--stratum", "1,2", "--component", "unique", "--degree", "5"]).0, 2);
    assert_eq!(call(&["classify", "--h", "(1,2", "--v", "(1,2)"]).0, 2);
    assert_eq!(call(&["verify", "--in", "/nonexistent/cert.json"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("census"));
}

#[test]
fn build_and_census_are_deterministic() {
    for args in [
        &["build", "--stratum", "2,4,6", "--component", "odd", "--degree", "7"][..],
        &["build", "--stratum", "1,1,2", "--component", "unique", "--degree", "5"][..],
        &["census", "--degree", "5"][..],
        &["census", "--degree", "5", "--jobs", "3"][..],
    ] {
        assert_eq!(call(args), call(args), "{:?}", args);
    }
    assert_eq!(call(&["census", "--degree", "5", "--jobs", "1"]), call(&["census", "--degree", "5", "--jobs", "4"]));
}

#[test]
fn binary_exit_codes_and_guard_variable() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_origami-forge");
    let status = |args: &[&str], guard: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(args);
        match guard {
            Some(g) => c.env("ORIGAMI_FORGE_CENSUS_GUARD", g),
            None => c.env_remove("ORIGAMI_FORGE_CENSUS_GUARD"),
        };
        c.output().unwrap()
    };
    assert_eq!(status(&["census", "--degree", "4"], None).status.code(), Some(0));
    assert_eq!(status(&["census", "--degree", "4"], Some("3")).status.code(), Some(2));
    assert_eq!(status(&["census", "--degree", "4"], Some("4")).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let built = status(&["build", "--stratum", "2", "--component", "hyp", "--degree", "3"], None);
    let mut v: Value = serde_json::from_slice(&built.stdout).unwrap();
    v["degree"] = 4.into();
    fs::write(&cert, v.to_string()).unwrap();
    assert_eq!(status(&["verify", "--in", cert.to_str().unwrap()], None).status.code(), Some(1));
}
