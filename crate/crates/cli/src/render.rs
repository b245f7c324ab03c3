use centangle::rational::{is_terminating, to_decimal, to_fixed, Q};
use serde_json::{json, Value};

use crate::SCHEMA_VERSION;

/// Exact digits for terminating values, otherwise 30 places rounded.
pub fn decimal(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else if is_terminating(q) {
        to_decimal(q, 200)
    } else {
        to_fixed(q, 30)
    }
}

pub fn rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `{"decimal": ..., "rational": ...}`.
pub fn exact(q: &Q) -> Value {
    json!({ "decimal": decimal(q), "rational": rational(q) })
}

/// Stamps `schema_version` onto a JSON object and pretty-prints it.
pub fn document(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}
