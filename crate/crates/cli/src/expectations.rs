//! Expected values for every check, kept in a data file next to the crate.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

const BUNDLED: &str = include_str!("../data/expectations.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Expectations {
    pub checks: BTreeMap<String, Value>,
    pub classify: BTreeMap<u64, Value>,
}

impl Expectations {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED).expect("bundled expectations parse")
    }

    pub fn check(&self, id: &str) -> Value {
        self.checks.get(id).cloned().unwrap_or(Value::Null)
    }
}

/// Records every place where `got` differs from the (possibly partial)
/// `expected` tree. Objects are compared key by key on the expected side.
pub fn diff(expected: &Value, got: &Value) -> Vec<String> {
    if expected.is_null() {
        return vec!["no expectation recorded".into()];
    }
    let mut out = Vec::new();
    walk(expected, got, String::new(), &mut out);
    out
}

fn walk(expected: &Value, got: &Value, path: String, out: &mut Vec<String>) {
    match (expected, got) {
        (Value::Object(e), Value::Object(g)) => {
            for (k, ev) in e {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match g.get(k) {
                    Some(gv) => walk(ev, gv, p, out),
                    None => out.push(format!("{p}: expected {ev}, missing")),
                }
            }
        }
        _ if expected == got => {}
        _ => out.push(format!("{path}: expected {expected}, got {got}")),
    }
}
