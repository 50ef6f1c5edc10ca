use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schemas/surface-spec.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn minsurf(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_minsurf")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn errors(v: &jsonschema::Validator, instance: &Value) -> Vec<String> {
    v.iter_errors(instance).map(|e| e.to_string()).collect()
}

#[test]
fn catalog_specs_conform_to_schema() {
    let v = validator();
    let list = minsurf(&["--json", "catalog"]);
    for spec in list.as_array().unwrap() {
        assert!(errors(&v, spec).is_empty(), "{}: {:?}", spec["name"], errors(&v, spec));
    }
}

#[test]
fn family_output_conforms_to_schema() {
    let v = validator();
    for spec in [minsurf(&["associate", "helicatenoid", "--t", "0.5"]), minsurf(&["conjugate", "helicoid"])] {
        assert!(errors(&v, &spec).is_empty(), "{:?}", errors(&v, &spec));
    }
}

#[test]
fn fixtures_against_schema() {
    let v = validator();
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let read = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(fixtures.join(name)).unwrap()).unwrap()
    };
    assert!(v.is_valid(&read("non_null.json")));
    assert!(!v.is_valid(&read("schema_error.json")));
    let mut bad = read("non_null.json");
    bad["domain"]["type"] = Value::from("ellipse");
    assert!(!v.is_valid(&bad));
    let mut extra = read("non_null.json");
    extra["color"] = Value::from("red");
    assert!(!v.is_valid(&extra));
}
