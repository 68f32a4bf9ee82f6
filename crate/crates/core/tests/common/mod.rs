#![allow(dead_code)]

pub mod validator;
pub mod xsdgen;

use std::path::PathBuf;

use serde_json::Value;
use xsd2jsonschema::SchemaValue;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fixture_json(name: &str) -> Value {
    serde_json::from_slice(&fixture(name)).unwrap()
}

/// Converts a parsed JSON document into the crate's value model.
pub fn to_schema_value(v: &Value) -> SchemaValue {
    match v {
        Value::Object(m) => {
            SchemaValue::object(m.iter().map(|(k, v)| (k.clone(), to_schema_value(v))))
        }
        Value::Array(a) => SchemaValue::Array(a.iter().map(to_schema_value).collect()),
        Value::String(s) => SchemaValue::str(s.clone()),
        Value::Bool(b) => SchemaValue::Bool(*b),
        Value::Null => SchemaValue::Null,
        Value::Number(n) => SchemaValue::Num(n.to_string().parse().expect("decimal")),
    }
}

pub fn parse_json(text: &str) -> SchemaValue {
    to_schema_value(&serde_json::from_str(text).expect("valid JSON"))
}

/// JSON text of a schema value, reparsed for the oracle.
pub fn to_json(v: &SchemaValue) -> Value {
    serde_json::from_str(&xsd2jsonschema::schema::serialize(v, false, 0)).expect("valid JSON")
}
