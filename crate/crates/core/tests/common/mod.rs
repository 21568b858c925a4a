#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{Map, Value};

pub fn qosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qosc"))
        .args(args)
        .output()
        .expect("qosc binary runs")
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Structure of a json document: objects keep their keys, arrays collapse
/// to the union of their element shapes, scalars become type names.
pub fn shape(v: &Value) -> Value {
    match v {
        Value::Null => Value::from("null"),
        Value::Bool(_) => Value::from("bool"),
        Value::Number(_) => Value::from("number"),
        Value::String(_) => Value::from("string"),
        Value::Array(items) => {
            let merged = items.iter().map(shape).fold(None, |acc: Option<Value>, s| {
                Some(match acc {
                    None => s,
                    Some(a) => merge(a, s),
                })
            });
            Value::Array(merged.into_iter().collect())
        }
        Value::Object(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), shape(v))).collect()),
    }
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut x), Value::Object(y)) => {
            for (k, v) in y {
                let merged = match x.remove(&k) {
                    Some(old) => merge(old, v),
                    None => v,
                };
                x.insert(k, merged);
            }
            Value::Object(x)
        }
        (Value::Array(x), Value::Array(y)) => {
            let all: Vec<Value> = x.into_iter().chain(y).collect();
            shape_union(all)
        }
        // residuals are numbers, or "inf" for checks that could not be evaluated
        (Value::String(x), Value::String(y)) => {
            let names: std::collections::BTreeSet<&str> = x.split('|').chain(y.split('|')).collect();
            Value::from(names.into_iter().collect::<Vec<_>>().join("|"))
        }
        (a, _) => a,
    }
}

fn shape_union(items: Vec<Value>) -> Value {
    let merged = items.into_iter().reduce(merge);
    Value::Array(merged.into_iter().collect())
}

/// Removes the wall-time field, the only non-deterministic part.
pub fn without_wall_time(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.remove("wall_time_s");
    }
    v
}

pub fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}
