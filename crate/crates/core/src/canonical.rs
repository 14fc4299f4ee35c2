//! Canonical output: floats rounded to 12 significant digits and JSON with
//! sorted keys, so identical inputs give identical bytes.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Non-finite values
/// and zero pass through (negative zero becomes zero).
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal text of the rounded value.
pub fn format_float(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() && r == r.trunc() && r.abs() < 1e15 {
        format!("{r:.1}")
    } else {
        format!("{r}")
    }
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Value::Number(Number::from_f64(round_sig(x)).expect("serde_json numbers are finite"))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonicalize(v));
            }
            Value::Object(out)
        }
        other => other,
    }
}

/// Canonical value tree of `value`.
pub fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::Format(format!("serialization failed: {e}")))?;
    Ok(canonicalize(v))
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
