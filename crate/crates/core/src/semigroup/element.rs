use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

/// A reduced Steinberg word `t^t · x_{i1} ⋯ x_{ik}`.
///
/// Every element of the Steinberg semigroup has exactly one such normal
/// form, since the relations only ever rewrite an `x_i` followed by `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub t: u64,
    pub x: Vec<u64>,
}

impl Word {
    pub fn new(t: u64, x: Vec<u64>) -> Self {
        Word { t, x }
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0 && self.x.is_empty()
    }
}

/// A canonical semigroup element.
///
/// The encoding is family specific but always canonical: two elements of
/// the same semigroup are equal iff their encodings are identical. Which
/// variants are legal is decided by [`crate::Semigroup::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Integer carriers: naturals, residues, fan, zero semigroups, Cayley indices.
    Nat(u64),
    /// The absorbing zero of the type-(c) semigroup.
    Zero,
    /// A nonzero element `(m, n)` of the type-(c) semigroup.
    Pair(u64, u64),
    /// A Steinberg normal form.
    Word(Word),
    /// A finitely supported vector, as sorted `(position, value)` pairs with
    /// nonzero values.
    Vector(Vec<(u64, u64)>),
}

impl Element {
    /// JSON wire form: an integer, `"0"`, `[m, n]`, `{"t": a, "x": [..]}` or
    /// `[[position, value], ..]`.
    pub fn to_wire(&self) -> Value {
        match self {
            Element::Nat(n) => json!(n),
            Element::Zero => json!("0"),
            Element::Pair(m, n) => json!([m, n]),
            Element::Word(w) => json!({ "t": w.t, "x": w.x }),
            Element::Vector(v) => Value::Array(v.iter().map(|(p, c)| json!([p, c])).collect()),
        }
    }

    /// Shape-directed decoding of a wire value. The result still has to be
    /// checked against a concrete semigroup.
    pub fn from_wire(value: &Value) -> Result<Element, String> {
        match value {
            Value::Number(n) => n
                .as_u64()
                .map(Element::Nat)
                .ok_or_else(|| format!("not a nonnegative integer: {n}")),
            Value::String(s) if s == "0" => Ok(Element::Zero),
            Value::Array(items) => {
                if items.len() == 2 && items.iter().all(Value::is_number) {
                    let m = as_u64(&items[0])?;
                    let n = as_u64(&items[1])?;
                    return Ok(Element::Pair(m, n));
                }
                let mut pairs = Vec::with_capacity(items.len());
                for item in items {
                    match item {
                        Value::Array(pv) if pv.len() == 2 => {
                            pairs.push((as_u64(&pv[0])?, as_u64(&pv[1])?));
                        }
                        other => return Err(format!("expected [position, value], got {other}")),
                    }
                }
                Ok(Element::Vector(pairs))
            }
            Value::Object(map) => {
                let t = match map.get("t") {
                    Some(v) => as_u64(v)?,
                    None => 0,
                };
                let x = match map.get("x") {
                    Some(Value::Array(xs)) => xs.iter().map(as_u64).collect::<Result<Vec<_>, _>>()?,
                    Some(other) => return Err(format!("expected an index array, got {other}")),
                    None => Vec::new(),
                };
                if map.keys().any(|k| k != "t" && k != "x") {
                    return Err(format!("unexpected keys in word {value}"));
                }
                Ok(Element::Word(Word { t, x }))
            }
            other => Err(format!("unrecognised element wire form {other}")),
        }
    }
}

fn as_u64(v: &Value) -> Result<u64, String> {
    v.as_u64().ok_or_else(|| format!("not a nonnegative integer: {v}"))
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_wire())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Element::from_wire(&value).map_err(D::Error::custom)
    }
}
