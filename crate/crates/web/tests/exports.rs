use classtrace_web::{build_witness, list_classes, trace_set};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn lists_sl3_of_2() {
    let v = parse(list_classes(2, 3, "SL"));
    assert_eq!(v["classes"].as_array().unwrap().len(), 6);
}

#[test]
fn witness_round_trip() {
    let v = parse(build_witness(5, 3, "M", "x^3-2", "x-1,(x-1)^2", "3", 1));
    assert_eq!(v["trace"], "3");
}

#[test]
fn errors_are_json() {
    let v = parse(build_witness(3, 2, "M", "(x-1)^2", "x^2+1", "0", 1));
    assert_eq!(v["error"]["kind"], "trace-excluded");
    let v = parse(list_classes(6, 2, "M"));
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn irreducible_gl2_of_3_trace_set() {
    let v = parse(trace_set(3, 2, "GL", "x^2+1", "x^2+x-1"));
    assert_eq!(v["complete"], true);
}
