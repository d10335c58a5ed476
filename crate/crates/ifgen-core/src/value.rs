//! Runtime values exchanged over the generated control interface.
//!
//! The tagged serde form (`{"type": "integer", "value": 42}`) appears in
//! test vectors and binding-spec constants, where the type must survive
//! serialization. On the JSON control channel values travel *untagged* and
//! are decoded against the expected signature instead (see
//! [`Value::from_wire_json`]).

use serde::{Deserialize, Serialize};

use crate::doc::SemanticType;

/// Relative tolerance used when comparing real-valued outputs.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value")]
pub enum Value {
    #[serde(rename = "text")]
    Text(String),
    #[serde(rename = "integer")]
    Integer(i64),
    #[serde(rename = "real")]
    Real(f64),
    #[serde(rename = "boolean")]
    Boolean(bool),
    /// Milliseconds since the Unix epoch.
    #[serde(rename = "timestamp")]
    Timestamp(i64),
    #[serde(rename = "list-of-text")]
    TextList(Vec<String>),
}

impl Value {
    pub fn semantic_type(&self) -> SemanticType {
        match self {
            Value::Text(_) => SemanticType::Text,
            Value::Integer(_) => SemanticType::Integer,
            Value::Real(_) => SemanticType::Real,
            Value::Boolean(_) => SemanticType::Boolean,
            Value::Timestamp(_) => SemanticType::Timestamp,
            Value::TextList(_) => SemanticType::ListOfText,
        }
    }

    /// Equality with a relative tolerance on reals; all other variants
    /// compare exactly.
    pub fn approx_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => {
                let scale = a.abs().max(b.abs());
                (a - b).abs() <= REAL_TOLERANCE * scale.max(1.0)
            }
            (a, b) => a == b,
        }
    }

    /// Render to the plain (untagged) JSON wire form.
    pub fn to_wire_json(&self) -> serde_json::Value {
        match self {
            Value::Text(s) => serde_json::Value::String(s.clone()),
            Value::Integer(i) => serde_json::Value::from(*i),
            Value::Real(r) => serde_json::Value::from(*r),
            Value::Boolean(b) => serde_json::Value::Bool(*b),
            Value::Timestamp(ms) => serde_json::Value::from(*ms),
            Value::TextList(items) => {
                serde_json::Value::Array(items.iter().map(|s| s.clone().into()).collect())
            }
        }
    }

    /// Decode a plain JSON wire value against an expected semantic type.
    /// Numbers are ambiguous on the wire (`3` could be an integer, a real,
    /// or a timestamp), so decoding is always type-directed.
    pub fn from_wire_json(
        json: &serde_json::Value,
        expected: SemanticType,
    ) -> Result<Value, String> {
        let fail = || {
            Err(format!(
                "expected {expected}, got incompatible JSON value {json}"
            ))
        };
        match expected {
            SemanticType::Text => match json.as_str() {
                Some(s) => Ok(Value::Text(s.to_string())),
                None => fail(),
            },
            SemanticType::Integer => match json.as_i64() {
                Some(i) => Ok(Value::Integer(i)),
                None => fail(),
            },
            SemanticType::Real => match json.as_f64() {
                // as_f64 also accepts integral JSON numbers, which is wanted:
                // `3` is a fine wire form for the real 3.0.
                Some(r) if r.is_finite() => Ok(Value::Real(r)),
                _ => fail(),
            },
            SemanticType::Boolean => match json.as_bool() {
                Some(b) => Ok(Value::Boolean(b)),
                None => fail(),
            },
            SemanticType::Timestamp => match json.as_i64() {
                Some(ms) => Ok(Value::Timestamp(ms)),
                None => fail(),
            },
            SemanticType::ListOfText => match json.as_array() {
                Some(items) => {
                    let mut out = Vec::with_capacity(items.len());
                    for item in items {
                        match item.as_str() {
                            Some(s) => out.push(s.to_string()),
                            None => return fail(),
                        }
                    }
                    Ok(Value::TextList(out))
                }
                None => fail(),
            },
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Text(s) => write!(f, "{s:?}"),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Timestamp(ms) => write!(f, "@{ms}ms"),
            Value::TextList(items) => write!(f, "{items:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagged_form_round_trips() {
        let values = vec![
            Value::Text("hi".to_string()),
            Value::Integer(-7),
            Value::Real(2.5),
            Value::Boolean(true),
            Value::Timestamp(1_700_000_000_000),
            Value::TextList(vec!["a".to_string(), "b".to_string()]),
        ];
        for v in values {
            let s = serde_json::to_string(&v).unwrap();
            let back: Value = serde_json::from_str(&s).unwrap();
            assert_eq!(v, back, "via {s}");
        }
    }

    #[test]
    fn wire_decoding_is_type_directed() {
        let n = serde_json::json!(42);
        assert_eq!(
            Value::from_wire_json(&n, SemanticType::Integer).unwrap(),
            Value::Integer(42)
        );
        assert_eq!(
            Value::from_wire_json(&n, SemanticType::Real).unwrap(),
            Value::Real(42.0)
        );
        assert_eq!(
            Value::from_wire_json(&n, SemanticType::Timestamp).unwrap(),
            Value::Timestamp(42)
        );
        assert!(Value::from_wire_json(&n, SemanticType::Text).is_err());

        let frac = serde_json::json!(1.5);
        assert!(Value::from_wire_json(&frac, SemanticType::Integer).is_err());
        assert!(Value::from_wire_json(&frac, SemanticType::Real).is_ok());

        let list = serde_json::json!(["x", 3]);
        assert!(Value::from_wire_json(&list, SemanticType::ListOfText).is_err());
    }

    #[test]
    fn approx_eq_tolerates_tiny_real_drift() {
        let a = Value::Real(1000.0);
        let b = Value::Real(1000.0 + 1e-7);
        assert!(a.approx_eq(&b));
        let c = Value::Real(1000.1);
        assert!(!a.approx_eq(&c));
        // Non-reals stay exact.
        assert!(!Value::Integer(1).approx_eq(&Value::Integer(2)));
        assert!(!Value::Integer(1).approx_eq(&Value::Real(1.0)));
    }
}
