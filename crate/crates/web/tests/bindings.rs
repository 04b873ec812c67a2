use origami_forge_web::{build_cover, classify_origami, haupt_check};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn build_returns_certificate_and_picture() {
    let v = parse(build_cover("2,4,6", "odd", 7));
    assert_eq!(v["certificate"]["degree"], 7);
    assert_eq!(v["certificate"]["component"], "odd");
    assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
    assert!(parse(build_cover("2,4,6", "hyp", 7))["error"].is_string());
    assert!(parse(build_cover("2", "hyp", 500))["error"].is_string());
}

#[test]
fn classify_cycles() {
    let v = parse(classify_origami("(1,3,5)", "(1,2)(3,4)"));
    assert_eq!(v["stratum"], serde_json::json!([4]));
    assert_eq!(v["component"], "odd");
    assert_eq!(v["primitive"], true);
    assert!(parse(classify_origami("(1,2)", "(3,4)"))["error"].is_string());
}

#[test]
fn haupt_verdicts() {
    let chi = r#"{"genus":2,"a":[["1","0"],["1","0"]],"b":[["0","1"],["0","1"]]}"#;
    assert_eq!(parse(haupt_check(chi, "2"))["verdict"], "not_realizable");
    assert_eq!(parse(haupt_check(chi, "1,1"))["degree"], 2);
    assert!(parse(haupt_check("{", "1,1"))["error"].is_string());
}
