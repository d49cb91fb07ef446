//! Integer and rational scalars plus their JSON encodings.
//!
//! Integers that fit in an `i64` are written as JSON numbers, larger ones as
//! decimal strings. Rationals are always `{"num": .., "den": ..}` with a
//! positive denominator in lowest terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Deserialize;
use serde_json::Value;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn int_to_json(v: &Int) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub fn rat_to_json(v: &Rat) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("num".into(), int_to_json(v.numer()));
    map.insert("den".into(), int_to_json(v.denom()));
    Value::Object(map)
}

pub fn int_from_json(v: &Value) -> Result<Int, String> {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.as_i64() {
                Ok(Int::from(x))
            } else if let Some(x) = n.as_u64() {
                Ok(Int::from(x))
            } else {
                Err(format!("expected an integer, got {n}"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<Int>()
            .map_err(|_| format!("expected an integer, got \"{s}\"")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

pub fn rat_from_json(v: &Value) -> Result<Rat, String> {
    match v {
        Value::Object(map) => {
            let num = map.get("num").ok_or("rational is missing \"num\"")?;
            let den = map.get("den").ok_or("rational is missing \"den\"")?;
            let den = int_from_json(den)?;
            if den.is_zero() {
                return Err("rational has zero denominator".into());
            }
            Ok(Rat::new(int_from_json(num)?, den))
        }
        other => int_from_json(other).map(Rat::from_integer),
    }
}

/// `serialize_with` / `deserialize_with` helpers for big integers.
pub mod serde_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let v = Value::deserialize(d)?;
        int_from_json(&v).map_err(de::Error::custom)
    }
}

pub mod serde_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&int_to_json(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter()
            .map(int_from_json)
            .collect::<Result<_, _>>()
            .map_err(de::Error::custom)
    }
}

pub mod serde_int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Value>> = v
            .iter()
            .map(|row| row.iter().map(int_to_json).collect())
            .collect();
        s.collect_seq(rows)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let v = Vec::<Vec<Value>>::deserialize(d)?;
        v.iter()
            .map(|row| row.iter().map(int_from_json).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(de::Error::custom)
    }
}

pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("num", &int_to_json(v.numer()))?;
        map.serialize_entry("den", &int_to_json(v.denom()))?;
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = Value::deserialize(d)?;
        rat_from_json(&v).map_err(de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_to_json))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter()
            .map(rat_from_json)
            .collect::<Result<_, _>>()
            .map_err(de::Error::custom)
    }
}

/// Human-readable rational: `p` for integers, `p/q` otherwise.
pub fn fmt_rat(v: &Rat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
