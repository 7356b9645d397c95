//! Sequences as JSON arrays: numbers for reals, `[re, im]` pairs for complex.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

fn number(v: &Value, at: usize) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::MalformedSeq(format!("element {at}: expected a number, found {v}")))
}

pub fn parse_seq(text: &str) -> Result<Vec<Scalar>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::MalformedSeq(e.to_string()))?;
    let arr = v.as_array().ok_or_else(|| Error::MalformedSeq("top level must be an array".into()))?;
    arr.iter()
        .enumerate()
        .map(|(i, e)| match e {
            Value::Array(p) if p.len() == 2 => Ok(c(number(&p[0], i)?, number(&p[1], i)?)),
            Value::Array(p) => Err(Error::MalformedSeq(format!("element {i}: pair has {} entries", p.len()))),
            other => Ok(c(number(other, i)?, 0.0)),
        })
        .collect()
}

/// Reals as plain numbers when every imaginary part is zero, pairs otherwise.
pub fn format_seq(v: &[Scalar]) -> String {
    let real = v.iter().all(|z| z.im == 0.0);
    let items: Vec<Value> = v
        .iter()
        .map(|z| if real { num(z.re) } else { Value::Array(vec![num(z.re), num(z.im)]) })
        .collect();
    serde_json::to_string(&Value::Array(items)).expect("serializable")
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_seq("[1, [2, -1], 0.5]").unwrap(), vec![c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.0)]);
        assert!(parse_seq("[]").unwrap().is_empty());
        assert!(matches!(parse_seq("{}"), Err(Error::MalformedSeq(_))));
        assert!(matches!(parse_seq("[[1]]"), Err(Error::MalformedSeq(_))));
        assert!(matches!(parse_seq("[\"a\"]"), Err(Error::MalformedSeq(_))));
        assert!(matches!(parse_seq("[1,"), Err(Error::MalformedSeq(_))));
    }

    proptest! {
        #[test]
        fn round_trip(v in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 0..20), real in any::<bool>()) {
            let s: Vec<Scalar> = v.iter().map(|&(a, b)| c(a, if real { 0.0 } else { b })).collect();
            prop_assert_eq!(parse_seq(&format_seq(&s)).unwrap(), s);
        }
    }
}
