//! JSON encodings of exact values. Rationals travel as `[num, den]` with
//! arbitrary-size integers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, Q};

pub fn int_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| Error::Parse(format!("not an integer: {n}")))
        }
        _ => Err(Error::Parse(format!("expected integer, got {v}"))),
    }
}

pub fn i64_from_json(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("expected machine integer, got {v}")))
}

pub fn q_to_json(c: &Q) -> Value {
    Value::Array(vec![int_to_json(c.numer()), int_to_json(c.denom())])
}

pub fn q_from_json(v: &Value) -> Result<Q> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => {
            let n = int_from_json(n)?;
            let d = int_from_json(d)?;
            if d == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Q::new(n, d))
        }
        _ => {
            // bare integers are accepted as a convenience
            int_from_json(v).map(Q::from_integer).map_err(|_| Error::Parse(format!("expected [num, den], got {v}")))
        }
    }
}

pub fn q_vec_to_json(cs: &[Q]) -> Value {
    Value::Array(cs.iter().map(q_to_json).collect())
}

pub fn q_vec_from_json(v: &Value) -> Result<Vec<Q>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected array, got {v}")))?
        .iter()
        .map(q_from_json)
        .collect()
}

/// `{"exp": [num, den], ...}`
pub fn laurent_to_json(f: &LaurentPoly) -> Value {
    let mut m = Map::new();
    for (e, c) in f.terms() {
        m.insert(e.to_string(), q_to_json(c));
    }
    Value::Object(m)
}

pub fn laurent_from_json(v: &Value) -> Result<LaurentPoly> {
    let obj = v.as_object().ok_or_else(|| Error::Parse(format!("expected object, got {v}")))?;
    let mut f = LaurentPoly::zero();
    for (k, c) in obj {
        let e: i64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
        f.add_term(e, q_from_json(c)?);
    }
    Ok(f)
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub(crate) fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("expected object, got {v}")))
}
