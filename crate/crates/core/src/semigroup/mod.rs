//! Built-in semigroup families, written additively throughout.
//!
//! A [`Semigroup`] is an immutable handle built from a [`SemigroupSpec`].
//! Every operation is a pure function of the handle and its arguments, so a
//! handle can be shared freely between worker threads.

mod cayley;
mod element;
mod steinberg;

use std::collections::HashMap;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use cayley::{associativity_violation, enumerate_finite_semigroups, CayleyEnumerator, MAX_ENUMERATION_ORDER};
pub use element::{Element, Word};

/// Default step bound for [`Semigroup::idempotent_power`].
pub const DEFAULT_CYCLE_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("Cayley table is not associative: ({x}+{y})+{z} != {x}+({y}+{z})")]
    NonAssociativeTable { x: usize, y: usize, z: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{element} is not an element of {family}")]
    ForeignElement { family: &'static str, element: String },
    #[error("{0} is not a group")]
    NotAGroup(&'static str),
    #[error("integer overflow while adding in {0}")]
    Overflow(&'static str),
    #[error("finite semigroup enumeration supports orders 1..=4, got {0}")]
    OrderTooLarge(usize),
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("malformed semigroup spec: {0}")]
    MalformedSpec(String),
}

/// Which carrier a truncated-addition semigroup lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TruncatedCarrier {
    /// `{1, …, cap}`.
    #[default]
    Finite,
    /// All of `ℕ = {1, 2, …}`; still `S + S ⊆ {2, …, cap}`.
    Naturals,
}

/// The built-in families.
///
/// Carriers: `ℕ` means `{1, 2, 3, …}` throughout. Residues mod `k` are
/// `{0, …, k-1}`. The type-(c) semigroup is `{0} ∪ ℕ×ℕ`. The direct sum
/// group is `⊕_{i≥1} ℤ/p` with the empty vector as identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemigroupSpec {
    Naturals,
    NatModK { k: u64 },
    /// `m ∧ n = 1` for distinct `m, n`; every element idempotent.
    Fan,
    TypeC,
    Steinberg,
    LeftZero,
    RightZero,
    NatMin,
    NatMax,
    /// `x + y = min(x + y, cap)`.
    TruncatedNat { cap: u64, carrier: TruncatedCarrier },
    DirectSumGroup { p: u64 },
    /// Row-major table of element indices `0..order`.
    FiniteCayley { order: usize, table: Vec<usize> },
}

impl SemigroupSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            SemigroupSpec::Naturals => "naturals",
            SemigroupSpec::NatModK { .. } => "nat_mod_k",
            SemigroupSpec::Fan => "fan",
            SemigroupSpec::TypeC => "type_c",
            SemigroupSpec::Steinberg => "steinberg",
            SemigroupSpec::LeftZero => "left_zero",
            SemigroupSpec::RightZero => "right_zero",
            SemigroupSpec::NatMin => "nat_min",
            SemigroupSpec::NatMax => "nat_max",
            SemigroupSpec::TruncatedNat { .. } => "truncated_nat",
            SemigroupSpec::DirectSumGroup { .. } => "direct_sum_group",
            SemigroupSpec::FiniteCayley { .. } => "finite_cayley",
        }
    }

    fn params(&self) -> Value {
        match self {
            SemigroupSpec::NatModK { k } => json!({ "k": k }),
            SemigroupSpec::TruncatedNat { cap, carrier } => json!({
                "cap": cap,
                "carrier": match carrier {
                    TruncatedCarrier::Finite => "finite",
                    TruncatedCarrier::Naturals => "naturals",
                },
            }),
            SemigroupSpec::DirectSumGroup { p } => json!({ "p": p }),
            SemigroupSpec::FiniteCayley { order, table } => json!({ "order": order, "table": table }),
            _ => Value::Object(Map::new()),
        }
    }

    /// Parses `{"family": …, "params": {…}}`.
    pub fn from_json(value: &Value) -> Result<SemigroupSpec, SemigroupError> {
        let bad = |msg: String| SemigroupError::MalformedSpec(msg);
        let obj = value.as_object().ok_or_else(|| bad("expected a JSON object".into()))?;
        let family = obj
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string field \"family\"".into()))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(p)) => p,
            Some(other) => return Err(bad(format!("params must be an object, got {other}"))),
        };
        let uint = |key: &str| -> Result<u64, SemigroupError> {
            params
                .get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(format!("{family} needs a nonnegative integer parameter \"{key}\"")))
        };
        Ok(match family {
            "naturals" => SemigroupSpec::Naturals,
            "nat_mod_k" => SemigroupSpec::NatModK { k: uint("k")? },
            "fan" => SemigroupSpec::Fan,
            "type_c" => SemigroupSpec::TypeC,
            "steinberg" => SemigroupSpec::Steinberg,
            "left_zero" => SemigroupSpec::LeftZero,
            "right_zero" => SemigroupSpec::RightZero,
            "nat_min" => SemigroupSpec::NatMin,
            "nat_max" => SemigroupSpec::NatMax,
            "truncated_nat" => {
                let carrier = match params.get("carrier").and_then(Value::as_str) {
                    None | Some("finite") => TruncatedCarrier::Finite,
                    Some("naturals") => TruncatedCarrier::Naturals,
                    Some(other) => return Err(bad(format!("unknown truncated_nat carrier \"{other}\""))),
                };
                SemigroupSpec::TruncatedNat { cap: uint("cap")?, carrier }
            }
            "direct_sum_group" => SemigroupSpec::DirectSumGroup { p: uint("p")? },
            "finite_cayley" => {
                let order = uint("order")? as usize;
                let table = params
                    .get("table")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("finite_cayley needs a \"table\" array".into()))?
                    .iter()
                    .map(|v| v.as_u64().map(|u| u as usize).ok_or_else(|| bad(format!("bad table entry {v}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                SemigroupSpec::FiniteCayley { order, table }
            }
            other => return Err(bad(format!("unknown family \"{other}\""))),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "family": self.family_name(), "params": self.params() })
    }
}

impl Serialize for SemigroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SemigroupSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        SemigroupSpec::from_json(&value).map_err(D::Error::custom)
    }
}

/// Index and period of a cyclic subsemigroup `⟨x⟩`: the multiples
/// `index·x, …, (index+period-1)·x` form the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicStructure {
    pub index: u64,
    pub period: u64,
}

impl CyclicStructure {
    /// The unique `m` in the cycle with `m ≡ 0 (mod period)`; `m·x` is the
    /// idempotent of `⟨x⟩`.
    pub fn idempotent_multiple(&self) -> u64 {
        self.index.div_ceil(self.period) * self.period
    }
}

/// An immutable, shareable semigroup handle.
#[derive(Debug, Clone)]
pub struct Semigroup {
    spec: SemigroupSpec,
    cayley: Option<Arc<[usize]>>,
    group: bool,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Semigroup {
    /// Builds a handle, checking parameters and (for Cayley tables)
    /// associativity over all `order³` triples.
    pub fn new(spec: SemigroupSpec) -> Result<Semigroup, SemigroupError> {
        let mut cayley = None;
        let group = match &spec {
            SemigroupSpec::NatModK { k } => {
                if *k == 0 {
                    return Err(SemigroupError::InvalidParameter("nat_mod_k needs k >= 1".into()));
                }
                true
            }
            SemigroupSpec::TruncatedNat { cap, .. } => {
                if *cap == 0 {
                    return Err(SemigroupError::InvalidParameter("truncated_nat needs cap >= 1".into()));
                }
                false
            }
            SemigroupSpec::DirectSumGroup { p } => {
                if !is_prime(*p) {
                    return Err(SemigroupError::InvalidParameter(format!("direct_sum_group needs a prime p, got {p}")));
                }
                true
            }
            SemigroupSpec::FiniteCayley { order, table } => {
                cayley::check_table(*order, table)?;
                cayley = Some(Arc::from(table.as_slice()));
                cayley::is_group(*order, table)
            }
            _ => false,
        };
        Ok(Semigroup { spec, cayley, group })
    }

    pub fn from_json(value: &Value) -> Result<Semigroup, SemigroupError> {
        Semigroup::new(SemigroupSpec::from_json(value)?)
    }

    pub fn spec(&self) -> &SemigroupSpec {
        &self.spec
    }

    pub fn family_name(&self) -> &'static str {
        self.spec.family_name()
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self.spec,
            SemigroupSpec::NatModK { .. }
                | SemigroupSpec::FiniteCayley { .. }
                | SemigroupSpec::TruncatedNat { carrier: TruncatedCarrier::Finite, .. }
        )
    }

    pub fn is_group(&self) -> bool {
        self.group
    }

    /// Every built-in family has a ranked enumeration.
    pub fn has_enumeration(&self) -> bool {
        true
    }

    /// Number of elements, for finite families.
    pub fn size(&self) -> Option<u64> {
        match &self.spec {
            SemigroupSpec::NatModK { k } => Some(*k),
            SemigroupSpec::TruncatedNat { cap, carrier: TruncatedCarrier::Finite } => Some(*cap),
            SemigroupSpec::FiniteCayley { order, .. } => Some(*order as u64),
            _ => None,
        }
    }

    fn foreign(&self, x: &Element) -> SemigroupError {
        SemigroupError::ForeignElement { family: self.family_name(), element: x.to_string() }
    }

    /// Checks that `x` is a canonical encoding of an element of this family.
    pub fn validate(&self, x: &Element) -> Result<(), SemigroupError> {
        let ok = match (&self.spec, x) {
            (
                SemigroupSpec::Naturals
                | SemigroupSpec::Fan
                | SemigroupSpec::LeftZero
                | SemigroupSpec::RightZero
                | SemigroupSpec::NatMin
                | SemigroupSpec::NatMax
                | SemigroupSpec::TruncatedNat { carrier: TruncatedCarrier::Naturals, .. },
                Element::Nat(n),
            ) => *n >= 1,
            (SemigroupSpec::TruncatedNat { cap, carrier: TruncatedCarrier::Finite }, Element::Nat(n)) => {
                (1..=*cap).contains(n)
            }
            (SemigroupSpec::NatModK { k }, Element::Nat(n)) => n < k,
            (SemigroupSpec::FiniteCayley { order, .. }, Element::Nat(n)) => (*n as usize) < *order,
            (SemigroupSpec::TypeC, Element::Zero) => true,
            (SemigroupSpec::TypeC, Element::Pair(m, n)) => *m >= 1 && *n >= 1,
            (SemigroupSpec::Steinberg, Element::Word(w)) => !w.is_empty(),
            (SemigroupSpec::DirectSumGroup { p }, Element::Vector(v)) => {
                v.iter().all(|&(pos, val)| pos >= 1 && val >= 1 && val < *p)
                    && v.windows(2).all(|w| w[0].0 < w[1].0)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.foreign(x))
        }
    }

    /// Decodes a wire value, accepting the bare integer `0` for the type-(c)
    /// zero.
    pub fn parse_element(&self, value: &Value) -> Result<Element, SemigroupError> {
        let mut e = Element::from_wire(value).map_err(SemigroupError::MalformedElement)?;
        if matches!(self.spec, SemigroupSpec::TypeC) && e == Element::Nat(0) {
            e = Element::Zero;
        }
        self.validate(&e)?;
        Ok(e)
    }

    /// `x + y` in canonical form.
    pub fn add(&self, x: &Element, y: &Element) -> Result<Element, SemigroupError> {
        self.validate(x)?;
        self.validate(y)?;
        self.add_unchecked(x, y)
    }

    /// `x + y` for operands already known to be valid.
    pub(crate) fn add_unchecked(&self, x: &Element, y: &Element) -> Result<Element, SemigroupError> {
        let overflow = || SemigroupError::Overflow(self.family_name());
        Ok(match (&self.spec, x, y) {
            (SemigroupSpec::Naturals, Element::Nat(a), Element::Nat(b)) => {
                Element::Nat(a.checked_add(*b).ok_or_else(overflow)?)
            }
            (SemigroupSpec::NatModK { k }, Element::Nat(a), Element::Nat(b)) => {
                Element::Nat(((*a as u128 + *b as u128) % *k as u128) as u64)
            }
            (SemigroupSpec::Fan, Element::Nat(a), Element::Nat(b)) => Element::Nat(if a == b { *a } else { 1 }),
            (SemigroupSpec::TypeC, Element::Pair(m1, n1), Element::Pair(m2, n2)) if m1 == m2 => {
                Element::Pair(*m1, n1.checked_add(*n2).ok_or_else(overflow)?)
            }
            (SemigroupSpec::TypeC, _, _) => Element::Zero,
            (SemigroupSpec::Steinberg, Element::Word(u), Element::Word(v)) => {
                Element::Word(steinberg::add(u, v).ok_or_else(overflow)?)
            }
            (SemigroupSpec::LeftZero, a, _) => a.clone(),
            (SemigroupSpec::RightZero, _, b) => b.clone(),
            (SemigroupSpec::NatMin, Element::Nat(a), Element::Nat(b)) => Element::Nat(*a.min(b)),
            (SemigroupSpec::NatMax, Element::Nat(a), Element::Nat(b)) => Element::Nat(*a.max(b)),
            (SemigroupSpec::TruncatedNat { cap, .. }, Element::Nat(a), Element::Nat(b)) => {
                Element::Nat(a.saturating_add(*b).min(*cap))
            }
            (SemigroupSpec::DirectSumGroup { p }, Element::Vector(u), Element::Vector(v)) => {
                Element::Vector(vector_add(u, v, *p))
            }
            (SemigroupSpec::FiniteCayley { order, .. }, Element::Nat(a), Element::Nat(b)) => {
                let table = self.cayley.as_ref().expect("cayley table present");
                Element::Nat(table[*a as usize * order + *b as usize] as u64)
            }
            _ => return Err(self.foreign(if self.validate(x).is_err() { x } else { y })),
        })
    }

    /// The group identity.
    pub fn identity(&self) -> Result<Element, SemigroupError> {
        match &self.spec {
            SemigroupSpec::NatModK { .. } => Ok(Element::Nat(0)),
            SemigroupSpec::DirectSumGroup { .. } => Ok(Element::Vector(Vec::new())),
            SemigroupSpec::FiniteCayley { order, table } if self.group => {
                Ok(Element::Nat(cayley::identity(*order, table).expect("group has identity") as u64))
            }
            _ => Err(SemigroupError::NotAGroup(self.family_name())),
        }
    }

    /// The inverse of `x`; only defined for groups.
    pub fn negate(&self, x: &Element) -> Result<Element, SemigroupError> {
        if !self.group {
            return Err(SemigroupError::NotAGroup(self.family_name()));
        }
        self.validate(x)?;
        Ok(match (&self.spec, x) {
            (SemigroupSpec::NatModK { k }, Element::Nat(a)) => Element::Nat((k - a) % k),
            (SemigroupSpec::DirectSumGroup { p }, Element::Vector(v)) => {
                Element::Vector(v.iter().map(|&(pos, val)| (pos, p - val)).collect())
            }
            (SemigroupSpec::FiniteCayley { order, table }, Element::Nat(a)) => {
                let e = cayley::identity(*order, table).expect("group has identity");
                let a = *a as usize;
                let inv = (0..*order)
                    .find(|&y| table[a * order + y] == e && table[y * order + a] == e)
                    .expect("group element has an inverse");
                Element::Nat(inv as u64)
            }
            _ => unreachable!("only the families above are groups"),
        })
    }

    /// The `k`-fold sum `x + ⋯ + x`, `k ≥ 1`.
    pub fn power(&self, x: &Element, k: u64) -> Result<Element, SemigroupError> {
        if k == 0 {
            return Err(SemigroupError::InvalidParameter("power needs k >= 1".into()));
        }
        self.validate(x)?;
        // square-and-multiply; associativity makes the grouping irrelevant
        let mut base = x.clone();
        let mut acc: Option<Element> = None;
        let mut m = k;
        loop {
            if m & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.add_unchecked(&a, &base)?,
                });
            }
            m >>= 1;
            if m == 0 {
                break;
            }
            base = self.add_unchecked(&base, &base)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// Index and period of `⟨x⟩` if its multiples repeat within `bound`
    /// additions, found by plain iteration.
    pub fn idempotent_power(&self, x: &Element, bound: u64) -> Result<Option<CyclicStructure>, SemigroupError> {
        self.validate(x)?;
        let mut seen: HashMap<Element, u64> = HashMap::new();
        let mut current = x.clone();
        seen.insert(current.clone(), 1);
        for m in 2..=bound.saturating_add(1) {
            current = match self.add_unchecked(&current, x) {
                Ok(c) => c,
                Err(SemigroupError::Overflow(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if let Some(&j) = seen.get(&current) {
                return Ok(Some(CyclicStructure { index: j, period: m - j }));
            }
            seen.insert(current.clone(), m);
        }
        Ok(None)
    }

    pub fn is_idempotent(&self, x: &Element) -> Result<bool, SemigroupError> {
        Ok(self.add(x, x)? == *x)
    }

    /// The element of rank `r` (0-based) in the family's enumeration order.
    pub fn element_at(&self, r: u64) -> Option<Element> {
        match &self.spec {
            SemigroupSpec::Naturals
            | SemigroupSpec::Fan
            | SemigroupSpec::LeftZero
            | SemigroupSpec::RightZero
            | SemigroupSpec::NatMin
            | SemigroupSpec::NatMax
            | SemigroupSpec::TruncatedNat { carrier: TruncatedCarrier::Naturals, .. } => r.checked_add(1).map(Element::Nat),
            SemigroupSpec::TruncatedNat { cap, carrier: TruncatedCarrier::Finite } => {
                (r < *cap).then(|| Element::Nat(r + 1))
            }
            SemigroupSpec::NatModK { k } => (r < *k).then_some(Element::Nat(r)),
            SemigroupSpec::FiniteCayley { order, .. } => (r < *order as u64).then_some(Element::Nat(r)),
            SemigroupSpec::TypeC => {
                if r == 0 {
                    return Some(Element::Zero);
                }
                // diagonal d = m + n holds d - 1 pairs, listed with n ascending
                let mut before = 1u64;
                let mut d = 2u64;
                loop {
                    let len = d - 1;
                    if r < before + len {
                        let n = r - before + 1;
                        return Some(Element::Pair(d - n, n));
                    }
                    before = before.checked_add(len)?;
                    d = d.checked_add(1)?;
                }
            }
            SemigroupSpec::Steinberg => steinberg::unrank(r).map(Element::Word),
            SemigroupSpec::DirectSumGroup { p } => {
                let mut v = Vec::new();
                let mut rest = r;
                let mut pos = 1;
                while rest > 0 {
                    let digit = rest % p;
                    if digit != 0 {
                        v.push((pos, digit));
                    }
                    rest /= p;
                    pos += 1;
                }
                Some(Element::Vector(v))
            }
        }
    }

    /// Inverse of [`Semigroup::element_at`]; `None` for invalid elements or
    /// ranks beyond `u64`.
    pub fn rank(&self, x: &Element) -> Option<u64> {
        self.validate(x).ok()?;
        match (&self.spec, x) {
            (SemigroupSpec::NatModK { .. } | SemigroupSpec::FiniteCayley { .. }, Element::Nat(n)) => Some(*n),
            (_, Element::Nat(n)) => Some(n - 1),
            (SemigroupSpec::TypeC, Element::Zero) => Some(0),
            (SemigroupSpec::TypeC, Element::Pair(m, n)) => {
                let d = m.checked_add(*n)?;
                let before = (d - 2).checked_mul(d - 1)? / 2 + 1;
                before.checked_add(n - 1)
            }
            (SemigroupSpec::Steinberg, Element::Word(w)) => steinberg::rank(w),
            (SemigroupSpec::DirectSumGroup { p }, Element::Vector(v)) => v.iter().try_fold(0u64, |acc, &(pos, val)| {
                let scale = p.checked_pow(u32::try_from(pos - 1).ok()?)?;
                acc.checked_add(val.checked_mul(scale)?)
            }),
            _ => None,
        }
    }

    /// Sort key placing elements in rank order, unrankable ones last.
    pub fn rank_key(&self, x: &Element) -> (u64, Element) {
        (self.rank(x).unwrap_or(u64::MAX), x.clone())
    }

    /// The first `n` elements in rank order (fewer for small finite families).
    pub fn enumerate(&self, n: usize) -> Vec<Element> {
        (0..n as u64).map_while(|r| self.element_at(r)).collect()
    }

    /// The `i`-th term (1-based) of the default stream: rank order for
    /// infinite families; for finite families the enumeration read
    /// cyclically, so that residues mod `k` give `1, 2, …, k-1, 0, 1, …`.
    pub fn stream_element(&self, i: u64) -> Option<Element> {
        match self.size() {
            Some(m) => self.element_at(i % m),
            None => self.element_at(i.checked_sub(1)?),
        }
    }

    /// `len` terms of the default stream starting after `skip` terms,
    /// taking every `stride`-th term.
    pub fn stream(&self, len: usize, skip: u64, stride: u64) -> Vec<Element> {
        let stride = stride.max(1);
        (1..=len as u64)
            .map_while(|i| self.stream_element(skip.checked_add(i.checked_mul(stride)?)?))
            .collect()
    }
}

fn vector_add(u: &[(u64, u64)], v: &[(u64, u64)], p: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < v.len() {
        match (u.get(i), v.get(j)) {
            (Some(&(pa, a)), Some(&(pb, b))) if pa == pb => {
                let s = (a + b) % p;
                if s != 0 {
                    out.push((pa, s));
                }
                i += 1;
                j += 1;
            }
            (Some(&a), Some(&b)) if a.0 < b.0 => {
                out.push(a);
                i += 1;
            }
            (Some(_), Some(&b)) => {
                out.push(b);
                j += 1;
            }
            (Some(&a), None) => {
                out.push(a);
                i += 1;
            }
            (None, Some(&b)) => {
                out.push(b);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(spec: SemigroupSpec) -> Semigroup {
        Semigroup::new(spec).unwrap()
    }

    fn nat(n: u64) -> Element {
        Element::Nat(n)
    }

    #[test]
    fn construct_checks_tables() {
        let left_zero = sg(SemigroupSpec::FiniteCayley { order: 2, table: vec![0, 0, 1, 1] });
        assert!(!left_zero.is_group());
        assert_eq!(left_zero.add(&nat(1), &nat(0)).unwrap(), nat(1));

        // 0+0 = 1 makes (0+0)+1 = 0 but 0+(0+1) = 1
        let bad = Semigroup::new(SemigroupSpec::FiniteCayley { order: 2, table: vec![1, 0, 0, 0] });
        assert_eq!(bad.unwrap_err(), SemigroupError::NonAssociativeTable { x: 0, y: 0, z: 1 });

        let steinberg = sg(SemigroupSpec::Steinberg);
        assert!(!steinberg.is_finite());
        assert!(!steinberg.is_group());
    }

    #[test]
    fn invalid_parameters() {
        for spec in [
            SemigroupSpec::NatModK { k: 0 },
            SemigroupSpec::TruncatedNat { cap: 0, carrier: TruncatedCarrier::Finite },
            SemigroupSpec::DirectSumGroup { p: 4 },
            SemigroupSpec::DirectSumGroup { p: 1 },
            SemigroupSpec::FiniteCayley { order: 2, table: vec![0, 0, 0] },
            SemigroupSpec::FiniteCayley { order: 2, table: vec![0, 0, 0, 2] },
        ] {
            assert!(matches!(Semigroup::new(spec), Err(SemigroupError::InvalidParameter(_))));
        }
    }

    #[test]
    fn family_laws() {
        let fan = sg(SemigroupSpec::Fan);
        assert_eq!(fan.add(&nat(3), &nat(5)).unwrap(), nat(1));
        assert_eq!(fan.add(&nat(4), &nat(4)).unwrap(), nat(4));

        let c = sg(SemigroupSpec::TypeC);
        assert_eq!(c.add(&Element::Pair(2, 3), &Element::Pair(2, 5)).unwrap(), Element::Pair(2, 8));
        assert_eq!(c.add(&Element::Pair(1, 1), &Element::Pair(2, 1)).unwrap(), Element::Zero);
        assert_eq!(c.add(&Element::Zero, &Element::Pair(2, 1)).unwrap(), Element::Zero);

        let trunc = sg(SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Naturals });
        assert_eq!(trunc.add(&nat(30), &nat(11)).unwrap(), nat(10));
        assert_eq!(trunc.add(&nat(3), &nat(4)).unwrap(), nat(7));
        assert!(trunc.validate(&nat(500)).is_ok());
        let finite = sg(SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Finite });
        assert!(finite.validate(&nat(11)).is_err());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let n = sg(SemigroupSpec::Naturals);
        assert!(matches!(n.add(&nat(0), &nat(1)), Err(SemigroupError::ForeignElement { .. })));
        assert!(matches!(n.add(&Element::Zero, &nat(1)), Err(SemigroupError::ForeignElement { .. })));
        let g = sg(SemigroupSpec::DirectSumGroup { p: 3 });
        assert!(g.validate(&Element::Vector(vec![(2, 1), (1, 1)])).is_err());
        assert!(g.validate(&Element::Vector(vec![(1, 3)])).is_err());
        let s = sg(SemigroupSpec::Steinberg);
        assert!(s.validate(&Element::Word(Word::new(0, vec![]))).is_err());
    }

    #[test]
    fn negation() {
        let g2 = sg(SemigroupSpec::DirectSumGroup { p: 2 });
        let e3 = Element::Vector(vec![(3, 1)]);
        assert_eq!(g2.negate(&e3).unwrap(), e3);
        let g3 = sg(SemigroupSpec::DirectSumGroup { p: 3 });
        let e1 = Element::Vector(vec![(1, 1)]);
        assert_eq!(g3.negate(&e1).unwrap(), Element::Vector(vec![(1, 2)]));
        assert_eq!(g3.add(&e1, &g3.negate(&e1).unwrap()).unwrap(), g3.identity().unwrap());
        assert!(matches!(sg(SemigroupSpec::Naturals).negate(&nat(1)), Err(SemigroupError::NotAGroup(_))));

        let z4 = sg(SemigroupSpec::FiniteCayley {
            order: 4,
            table: (0..16).map(|c| (c / 4 + c % 4) % 4).collect(),
        });
        assert!(z4.is_group());
        assert_eq!(z4.negate(&nat(1)).unwrap(), nat(3));
    }

    #[test]
    fn enumeration_orders() {
        assert_eq!(sg(SemigroupSpec::Naturals).enumerate(3), vec![nat(1), nat(2), nat(3)]);
        assert_eq!(
            sg(SemigroupSpec::TypeC).enumerate(4),
            vec![Element::Zero, Element::Pair(1, 1), Element::Pair(2, 1), Element::Pair(1, 2)]
        );
        let lz = sg(SemigroupSpec::FiniteCayley { order: 2, table: vec![0, 0, 1, 1] });
        assert_eq!(lz.enumerate(5).len(), 2);
        assert_eq!(
            sg(SemigroupSpec::DirectSumGroup { p: 2 }).enumerate(4),
            vec![
                Element::Vector(vec![]),
                Element::Vector(vec![(1, 1)]),
                Element::Vector(vec![(2, 1)]),
                Element::Vector(vec![(1, 1), (2, 1)]),
            ]
        );
    }

    #[test]
    fn rank_inverts_enumeration() {
        for spec in [
            SemigroupSpec::Naturals,
            SemigroupSpec::TypeC,
            SemigroupSpec::Steinberg,
            SemigroupSpec::DirectSumGroup { p: 3 },
            SemigroupSpec::NatModK { k: 7 },
            SemigroupSpec::TruncatedNat { cap: 5, carrier: TruncatedCarrier::Finite },
        ] {
            let s = sg(spec);
            for (r, e) in s.enumerate(300).iter().enumerate() {
                assert_eq!(s.rank(e), Some(r as u64), "{} {e}", s.family_name());
            }
        }
    }

    #[test]
    fn powers() {
        assert_eq!(sg(SemigroupSpec::Naturals).power(&nat(3), 4).unwrap(), nat(12));
        assert_eq!(sg(SemigroupSpec::NatModK { k: 5 }).power(&nat(2), 5).unwrap(), nat(0));
        assert_eq!(sg(SemigroupSpec::Fan).power(&nat(7), 3).unwrap(), nat(7));
        assert!(sg(SemigroupSpec::Naturals).power(&nat(3), 0).is_err());
    }

    #[test]
    fn cyclic_structure() {
        let z6 = sg(SemigroupSpec::NatModK { k: 6 });
        let c = z6.idempotent_power(&nat(2), DEFAULT_CYCLE_BOUND).unwrap().unwrap();
        assert_eq!(c, CyclicStructure { index: 1, period: 3 });
        assert_eq!(c.idempotent_multiple(), 3);
        assert_eq!(z6.power(&nat(2), 3).unwrap(), nat(0));

        let fan = sg(SemigroupSpec::Fan);
        assert_eq!(fan.idempotent_power(&nat(5), 10).unwrap(), Some(CyclicStructure { index: 1, period: 1 }));
        assert_eq!(sg(SemigroupSpec::Naturals).idempotent_power(&nat(1), 100).unwrap(), None);

        // (1,1) in type (c) never repeats
        assert_eq!(sg(SemigroupSpec::TypeC).idempotent_power(&Element::Pair(1, 1), 50).unwrap(), None);
        // truncation: 3, 6, 9, 10, 10 -> index 4, period 1
        let t = sg(SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Finite });
        let c = t.idempotent_power(&nat(3), 100).unwrap().unwrap();
        assert_eq!(c, CyclicStructure { index: 4, period: 1 });
        assert_eq!(t.power(&nat(3), c.idempotent_multiple()).unwrap(), nat(10));
    }

    #[test]
    fn spec_json() {
        let spec = SemigroupSpec::from_json(&json!({"family": "nat_mod_k", "params": {"k": 5}})).unwrap();
        assert_eq!(spec, SemigroupSpec::NatModK { k: 5 });
        assert_eq!(SemigroupSpec::from_json(&json!({"family": "fan"})).unwrap(), SemigroupSpec::Fan);
        let t = SemigroupSpec::from_json(&json!({"family": "truncated_nat", "params": {"cap": 10, "carrier": "naturals"}}))
            .unwrap();
        assert_eq!(t, SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Naturals });
        assert_eq!(SemigroupSpec::from_json(&t.to_json()).unwrap(), t);
        assert!(SemigroupSpec::from_json(&json!({"family": "monoid"})).is_err());
        assert!(SemigroupSpec::from_json(&json!({"family": "nat_mod_k"})).is_err());
    }

    #[test]
    fn parse_elements() {
        let c = sg(SemigroupSpec::TypeC);
        assert_eq!(c.parse_element(&json!(0)).unwrap(), Element::Zero);
        assert_eq!(c.parse_element(&json!("0")).unwrap(), Element::Zero);
        assert_eq!(c.parse_element(&json!([2, 3])).unwrap(), Element::Pair(2, 3));
        assert!(c.parse_element(&json!([0, 3])).is_err());
        let s = sg(SemigroupSpec::Steinberg);
        assert_eq!(s.parse_element(&json!({"t": 2, "x": [1]})).unwrap(), Element::Word(Word::new(2, vec![1])));
    }

    #[test]
    fn default_streams() {
        let z5 = sg(SemigroupSpec::NatModK { k: 5 });
        assert_eq!(z5.stream(7, 0, 1), [1, 2, 3, 4, 0, 1, 2].map(nat).to_vec());
        assert_eq!(z5.stream(3, 0, 5), vec![nat(0); 3]);
        assert_eq!(sg(SemigroupSpec::Fan).stream(3, 1, 1), vec![nat(2), nat(3), nat(4)]);
    }
}
