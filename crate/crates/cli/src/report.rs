//! Report emission. Reports are JSON with keys in sorted order, floats in
//! fixed 17-significant-digit scientific notation, and integers verbatim,
//! so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Config;
use crate::error::CliError;

/// `d.dddddddddddddddde±x`; non-finite values become strings.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("\"{v}\"")
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat(' ').take(2 * n));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap()));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                let _ = write!(out, "{}: ", Value::String((*k).clone()));
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn versions() -> Value {
    json!({
        "hpowers-cli": env!("CARGO_PKG_VERSION"),
        "hpowers-core": hpowers_core::VERSION,
        "hpowers-heisenberg": hpowers_heisenberg::VERSION,
        "hpowers-rumin": hpowers_rumin::VERSION,
    })
}

/// Wrap a command result with the provenance every report carries.
pub fn envelope(command: &str, config: &Config, result: impl Serialize) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert("config_hash".into(), Value::String(config.hash()));
    m.insert("seed".into(), Value::from(config.run.seed));
    m.insert("versions".into(), versions());
    m.insert("result".into(), serde_json::to_value(result).expect("report serializes"));
    Value::Object(m)
}

pub fn provenance_lines(config: &Config) -> String {
    let v = versions();
    let mut names: Vec<String> = v
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| format!("{k}={}", v.as_str().unwrap()))
        .collect();
    names.sort();
    format!("# config_hash={}\n# versions={}\n", config.hash(), names.join(","))
}

/// Write to `path`, or to stdout when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
