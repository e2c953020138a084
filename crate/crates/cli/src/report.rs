//! The report envelope shared by every subcommand.
//!
//! Reals and complex numbers are serialized as strings in the library's
//! literal format, so output is stable across platforms and reparses with
//! the input grammar. Infinite margins become `null`.

use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use moebius_core::extended_plane::format_real;
use moebius_core::{format_point, ExtendedComplex, Gates};

#[derive(Serialize)]
struct Settings {
    eps_unit: String,
    eps_equal: String,
    k_max: u32,
    seed: u64,
}

#[derive(Serialize)]
pub struct Report {
    command: &'static str,
    exit_code: u8,
    status: &'static str,
    settings: Settings,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<String>,
}

fn status(code: u8) -> &'static str {
    match code {
        0 => "ok",
        1 => "selftest-failed",
        2 => "input-error",
        3 => "negative",
        4 => "indeterminate",
        5 => "unsupported",
        _ => "unknown",
    }
}

impl Report {
    pub fn new(command: &'static str, gates: &Gates, seed: u64, exit_code: u8, result: Value) -> Self {
        Report {
            command,
            exit_code,
            status: status(exit_code),
            settings: Settings {
                eps_unit: format_real(gates.unit),
                eps_equal: format_real(gates.equal),
                k_max: gates.k_max,
                seed,
            },
            result,
            elapsed_ms: None,
        }
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ms = Some(format_real(d.as_secs_f64() * 1e3));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// One `path: value` line per leaf.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{prefix}: []\n"));
            }
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// A real as a string, or `null` when infinite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(format_real(x))
    } else {
        Value::Null
    }
}

pub fn point_list(points: &[ExtendedComplex]) -> Value {
    json!(points.iter().map(|&p| format_point(p)).collect::<Vec<_>>())
}
