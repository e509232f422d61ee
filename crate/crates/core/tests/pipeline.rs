use defring_core::hypothesis::ParameterTuple;
use defring_core::report::{format_table, verify, UsageError, VerificationReport, VerifyOptions, SCHEMA_VERSION};
use serde_json::Value;

fn opts(p: u64, n: u32, ell: u64, q: u64, u: u64, a: u64) -> VerifyOptions {
    VerifyOptions { tuple: ParameterTuple { p, n, ell, q, u, a }, precision: None, bruteforce: false, skip_h1_bruteforce: false }
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn reports_are_deterministic_and_integral() {
    let first = serde_json::to_string_pretty(&verify(&opts(2, 1, 3, 2, 2, 1)).unwrap()).unwrap();
    let second = serde_json::to_string_pretty(&verify(&opts(2, 1, 3, 2, 2, 1)).unwrap()).unwrap();
    assert_eq!(first, second);
    let value: Value = serde_json::from_str(&first).unwrap();
    assert!(no_floats(&value));
    assert_eq!(value["schema_version"], SCHEMA_VERSION);
    assert_eq!(value["overall"]["verdict"], "pass");
    let back: VerificationReport = serde_json::from_str(&first).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), first);
}

#[test]
fn skipping_propagation_marks_h1() {
    let mut o = opts(2, 1, 3, 2, 2, 1);
    o.skip_h1_bruteforce = true;
    let r = verify(&o).unwrap();
    let value = serde_json::to_value(&r).unwrap();
    assert_eq!(value["h1"]["bruteforce"], "skipped");
    assert_eq!(value["h1"]["inflation"], 1);
    assert!(r.passed());
}

#[test]
fn failing_hypothesis_still_yields_a_report() {
    let r = verify(&opts(3, 1, 8, 2, 3, 4)).unwrap();
    assert!(!r.passed());
    assert!(!r.overall.failures.is_empty());
    assert!(r.obstructions.is_empty());
    let table = format_table(&[r]);
    assert!(table.lines().nth(1).unwrap().ends_with("FAIL"));
}

#[test]
fn explicit_precision_above_default_still_passes() {
    let mut o = opts(2, 1, 3, 2, 2, 1);
    o.precision = Some(4);
    let r = verify(&o).unwrap();
    assert_eq!(r.parameters.m, 4);
    assert!(r.passed(), "{:?}", r.overall.failures);
}

#[test]
fn bad_input_is_a_usage_error() {
    assert!(matches!(verify(&opts(4, 1, 3, 2, 2, 1)), Err(UsageError::Parameters(_))));
    assert!(matches!(verify(&opts(3, 1, 6, 2, 5, 1)), Err(UsageError::Parameters(_))));
    let mut o = opts(2, 1, 3, 2, 2, 1);
    o.precision = Some(2);
    assert!(matches!(verify(&o), Err(UsageError::Precision { m: 2, needed: 3 })));
}
