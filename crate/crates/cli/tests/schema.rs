use std::path::{Path, PathBuf};

use serde_json::{json, Value};

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema")
}

fn with_validator(name: &str, check: impl FnOnce(&jsonschema::Validator)) {
    let common = load(&schema_dir().join("common.schema.json"));
    let id = common["$id"].as_str().unwrap().to_string();
    let registry = jsonschema::Registry::new()
        .add(id, common)
        .unwrap()
        .prepare()
        .unwrap();
    let validator = jsonschema::options()
        .with_registry(&registry)
        .build(&load(&schema_dir().join(name)))
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    check(&validator);
}

fn golden_jobs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut jobs: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    jobs.sort();
    jobs
}

#[test]
fn golden_jobs_match_their_schemas() {
    for path in golden_jobs() {
        let job = load(&path);
        with_validator(&format!("{}.schema.json", job["kind"].as_str().unwrap()), |v| {
            let errors: Vec<String> = v.iter_errors(&job).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{}: {errors:?}", path.display());
        });
    }
}

#[test]
fn golden_results_match_the_envelope_schema() {
    with_validator("result.schema.json", |v| {
        for path in golden_jobs() {
            let expected = path.parent().unwrap().join("expected").join(path.file_name().unwrap());
            assert!(v.is_valid(&load(&expected)), "{}", expected.display());
        }
    });
}

#[test]
fn schemas_reject_wrong_shapes() {
    with_validator("lagrangians.schema.json", |v| {
        assert!(!v.is_valid(&json!({"version": "1", "kind": "lagrangians"})));
        assert!(!v.is_valid(&json!({"version": "1", "kind": "model", "space": {"standard": [2]}})));
        assert!(!v.is_valid(&json!({"version": "1", "kind": "lagrangians", "space": {"standard": [2], "carrier": [2]}})));
    });
    with_validator("quasisplit.schema.json", |v| {
        assert!(!v.is_valid(&json!({"version": "1", "kind": "quasisplit", "operation": "shear", "B": [2]})));
    });
}
