#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swarmfire"));
    cmd.env_remove("SWARMFIRE_SEED");
    cmd
}

pub fn swarmfire(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path.as_ref())
        .unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

pub fn schema(name: &str) -> serde_json::Value {
    serde_json::from_str(&read(schema_dir().join(format!("{name}.schema.json")))).unwrap()
}

pub fn validator(name: &str) -> jsonschema::Validator {
    let registry = jsonschema::Registry::new()
        .add("urn:swarmfire:schema:config", schema("config"))
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options()
        .with_registry(&registry)
        .build(&schema(name))
        .unwrap()
}

pub fn assert_valid(v: &jsonschema::Validator, instance: &serde_json::Value) {
    let errors: Vec<String> = v.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

/// Parses a CSV with a header line into JSON objects, typing numeric cells
/// as numbers.
pub fn csv_rows(text: &str) -> (Vec<String>, Vec<serde_json::Value>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            let obj: serde_json::Map<String, serde_json::Value> = header
                .iter()
                .zip(l.split(','))
                .map(|(k, v)| {
                    let val = match v.parse::<i64>() {
                        Ok(i) => serde_json::json!(i),
                        Err(_) => match v.parse::<f64>() {
                            Ok(f) => serde_json::json!(f),
                            Err(_) => serde_json::json!(v),
                        },
                    };
                    (k.clone(), val)
                })
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    (header, rows)
}
