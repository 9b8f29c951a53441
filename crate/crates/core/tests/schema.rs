//! Every report emitted by `audit all` conforms to the published schema.

use std::process::Command;

use serde_json::Value;
use xi_audit::report::SCHEMA;

/// Checks the subset of JSON Schema the report schema uses: `type`,
/// `required`, `properties`, `additionalProperties` and `enum`.
fn validate(v: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "number" => v.is_number(),
            other => return Err(format!("{path}: unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {t}, got {v}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            let sub = match props.and_then(|p| p.get(key)) {
                Some(s) => s,
                None => match schema.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{path}: unexpected {key}")),
                    Some(s @ Value::Object(_)) => s,
                    _ => continue,
                },
            };
            validate(value, sub, &format!("{path}.{key}"))?;
        }
    }
    if let (Some(items), Some(schema_items)) = (v.as_array(), schema.get("items")) {
        for (i, item) in items.iter().enumerate() {
            validate(item, schema_items, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn schema() -> Value {
    serde_json::from_str(SCHEMA).expect("schema is JSON")
}

#[test]
fn validator_rejects_malformed_reports() {
    let s = schema();
    let good = serde_json::json!({
        "measured": [1.0], "name": "x", "params": {"k": "v"}, "provenance": "p",
        "ratio_or_residual": 0.5, "reference": [], "tolerance": 1e-9, "verdict": "PASS"
    });
    validate(&good, &s, "$").unwrap();
    let mut extra = good.clone();
    extra["colour"] = Value::from("red");
    assert!(validate(&extra, &s, "$").is_err());
    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("tolerance");
    assert!(validate(&missing, &s, "$").is_err());
    let mut verdict = good.clone();
    verdict["verdict"] = Value::from("MAYBE");
    assert!(validate(&verdict, &s, "$").is_err());
    let mut param = good;
    param["params"]["k"] = Value::from(3);
    assert!(validate(&param, &s, "$").is_err());
}

#[test]
fn audit_all_reports_conform() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_xi-audit"))
        .current_dir(dir.path())
        .args(["audit", "all", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports: Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = reports.as_array().expect("array of reports");
    let s = schema();
    for r in reports {
        validate(r, &s, r["name"].as_str().unwrap_or("?")).unwrap();
    }
    let names: Vec<&str> = reports.iter().map(|r| r["name"].as_str().unwrap()).collect();
    for expected in [
        "eq5_norm_integral",
        "coupling_spectrum",
        "eq9_log_linear",
        "hadamard_product",
        "prefactor_equality",
        "zero_coincidence",
        "eq8_exponential",
        "difference_function",
        "audit_all",
    ] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    assert_eq!(*names.last().unwrap(), "audit_all");
}
