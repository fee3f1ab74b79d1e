//! Finite witnesses of the three forbidden subsemigroup patterns, and
//! certificates that a bijective sumsequence has a small `FS≥2` set.
//!
//! * type A: many distinct elements whose pairwise sums fall in a small set;
//! * type B: a fan, an idempotent center absorbing idempotent leaves whose
//!   pairwise sums are the center;
//! * type C: an idempotent absorbing free-looking generators whose multiples
//!   only add up across generators to the idempotent.
//!
//! A witness lists its named elements, every identity it relies on and the
//! groups of expressions it claims are pairwise distinct. [`ForbiddenWitness::verify`]
//! recomputes all of it from scratch.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::fs::{FsError, FsSet, SequencePrefix, DEFAULT_LENGTH_CAP};
use crate::search::Budget;
use crate::semigroup::{Element, Semigroup, SemigroupError, SemigroupSpec, TruncatedCarrier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    TypeA,
    TypeB,
    TypeC,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::TypeA, Pattern::TypeB, Pattern::TypeC];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::TypeA => "type_a",
            Pattern::TypeB => "type_b",
            Pattern::TypeC => "type_c",
        }
    }

    pub fn parse(s: &str) -> Option<Pattern> {
        Pattern::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// The family's law extends the pattern to an infinite subsemigroup.
    ExactForFamily,
    AtHorizon,
}

/// Whether the built-in family is known to contain the whole pattern.
fn exactness(sg: &Semigroup, pattern: Pattern) -> Exactness {
    let exact = matches!(
        (pattern, sg.spec()),
        (Pattern::TypeA, SemigroupSpec::TruncatedNat { carrier: TruncatedCarrier::Naturals, .. })
            | (Pattern::TypeB, SemigroupSpec::Fan)
            | (Pattern::TypeC, SemigroupSpec::TypeC)
    );
    if exact {
        Exactness::ExactForFamily
    } else {
        Exactness::AtHorizon
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    pub element: Element,
}

/// `lhs` and `rhs` are expressions `[k*]name + [k*]name + …`, summed left
/// to right, and both must evaluate to `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: String,
    pub rhs: String,
    pub value: Element,
}

/// A claim that failed on replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFailure {
    pub claim: String,
    pub detail: String,
}

impl ClaimFailure {
    pub fn new(claim: impl Into<String>, detail: impl Into<String>) -> ClaimFailure {
        ClaimFailure { claim: claim.into(), detail: detail.into() }
    }
}

impl std::fmt::Display for ClaimFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.claim, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenWitness {
    pub pattern: Pattern,
    /// Type A: `s1..sn` then cap-set elements `k1..km`; type B: `e` then
    /// leaves `l1..ln`; type C: `e` then generators `c1..cn`.
    pub elements: Vec<NamedElement>,
    pub identities: Vec<Identity>,
    /// Each group of expressions must take pairwise distinct values.
    pub distinct: Vec<Vec<String>>,
    /// Type C only: multiples `1..=B` of each generator are checked distinct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiple_bound: Option<u64>,
    pub exactness: Exactness,
}

fn eval(sg: &Semigroup, names: &HashMap<&str, &Element>, expr: &str) -> Result<Element, String> {
    let mut acc: Option<Element> = None;
    for term in expr.split('+') {
        let term = term.trim();
        let (k, name) = match term.split_once('*') {
            Some((k, name)) => (k.trim().parse::<u64>().map_err(|_| format!("bad multiplier in {term:?}"))?, name.trim()),
            None => (1, term),
        };
        if k == 0 {
            return Err(format!("zero multiple in {term:?}"));
        }
        let x = names.get(name).ok_or_else(|| format!("unknown name {name:?}"))?;
        let v = sg.power(x, k).map_err(|e| e.to_string())?;
        acc = Some(match acc {
            None => v,
            Some(a) => sg.add(&a, &v).map_err(|e| e.to_string())?,
        });
    }
    acc.ok_or_else(|| "empty expression".to_string())
}

fn mult(k: u64, name: &str) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{k}*{name}")
    }
}

/// Multiples `m` checked in cross sums and absorption: `1, 2, 3, B-1, B`.
pub fn sampled_multiples(bound: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = [1, 2, 3, bound.saturating_sub(1), bound].into_iter().filter(|&m| (1..=bound).contains(&m)).collect();
    set.into_iter().collect()
}

impl ForbiddenWitness {
    fn names(&self, prefix: &str) -> Vec<&NamedElement> {
        self.elements
            .iter()
            .filter(|e| e.name.strip_prefix(prefix).is_some_and(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())))
            .collect()
    }

    /// Replays every listed identity and distinctness claim, then rechecks
    /// the pattern's defining conditions directly on the named elements.
    pub fn verify(&self, sg: &Semigroup) -> Result<(), ClaimFailure> {
        let mut names: HashMap<&str, &Element> = HashMap::new();
        for e in &self.elements {
            sg.validate(&e.element).map_err(|err| ClaimFailure::new(format!("element {}", e.name), err.to_string()))?;
            if names.insert(&e.name, &e.element).is_some() {
                return Err(ClaimFailure::new(format!("element {}", e.name), "name used twice"));
            }
        }
        for id in &self.identities {
            let claim = format!("{} = {} = {}", id.lhs, id.rhs, id.value);
            for side in [&id.lhs, &id.rhs] {
                let v = eval(sg, &names, side).map_err(|d| ClaimFailure::new(&claim, d))?;
                if v != id.value {
                    return Err(ClaimFailure::new(&claim, format!("{side} evaluates to {v}")));
                }
            }
        }
        for group in &self.distinct {
            let mut seen: HashMap<Element, &str> = HashMap::new();
            for expr in group {
                let v = eval(sg, &names, expr).map_err(|d| ClaimFailure::new(format!("distinct {group:?}"), d))?;
                if let Some(other) = seen.insert(v.clone(), expr) {
                    return Err(ClaimFailure::new(format!("distinct {group:?}"), format!("{other} and {expr} are both {v}")));
                }
            }
        }
        if self.exactness == Exactness::ExactForFamily && exactness(sg, self.pattern) != Exactness::ExactForFamily {
            return Err(ClaimFailure::new("exactness", format!("{} is not whitelisted for {}", sg.family_name(), self.pattern.name())));
        }
        self.verify_pattern(sg)
    }

    fn verify_pattern(&self, sg: &Semigroup) -> Result<(), ClaimFailure> {
        let add = |x: &Element, y: &Element| sg.add(x, y).map_err(|e| ClaimFailure::new("pattern", e.to_string()));
        let distinct = |xs: &[&Element], what: &str| -> Result<(), ClaimFailure> {
            let set: HashSet<&Element> = xs.iter().copied().collect();
            if set.len() == xs.len() {
                Ok(())
            } else {
                Err(ClaimFailure::new(what, "elements are not pairwise distinct"))
            }
        };
        match self.pattern {
            Pattern::TypeA => {
                let s: Vec<&Element> = self.names("s").iter().map(|e| &e.element).collect();
                let cap: HashSet<&Element> = self.names("k").iter().map(|e| &e.element).collect();
                distinct(&s, "type_a family")?;
                if s.len() <= cap.len() {
                    return Err(ClaimFailure::new("type_a size", format!("{} elements against a cap set of {}", s.len(), cap.len())));
                }
                for x in &s {
                    for y in &s {
                        let v = add(x, y)?;
                        if !cap.contains(&v) {
                            return Err(ClaimFailure::new("type_a sums", format!("{x} + {y} = {v} is outside the cap set")));
                        }
                    }
                }
            }
            Pattern::TypeB => {
                let e = names_one(&self.elements, "e")?;
                let leaves: Vec<&Element> = self.names("l").iter().map(|n| &n.element).collect();
                let mut all = leaves.clone();
                all.push(e);
                distinct(&all, "type_b elements")?;
                if leaves.len() < 2 {
                    return Err(ClaimFailure::new("type_b size", "need at least two leaves"));
                }
                for x in &all {
                    if &add(x, x)? != *x {
                        return Err(ClaimFailure::new("type_b idempotents", format!("{x} is not idempotent")));
                    }
                }
                for (i, x) in leaves.iter().enumerate() {
                    if add(e, x)? != *e || add(x, e)? != *e {
                        return Err(ClaimFailure::new("type_b absorption", format!("{e} does not absorb {x}")));
                    }
                    for (j, y) in leaves.iter().enumerate() {
                        if i != j && add(x, y)? != *e {
                            return Err(ClaimFailure::new("type_b leaves", format!("{x} + {y} is not {e}")));
                        }
                    }
                }
            }
            Pattern::TypeC => {
                let e = names_one(&self.elements, "e")?;
                let bound = self.multiple_bound.ok_or_else(|| ClaimFailure::new("type_c bound", "missing"))?;
                if bound < 2 {
                    return Err(ClaimFailure::new("type_c bound", "must be at least 2"));
                }
                let gens: Vec<&Element> = self.names("c").iter().map(|n| &n.element).collect();
                if gens.len() < 2 {
                    return Err(ClaimFailure::new("type_c size", "need at least two generators"));
                }
                if &add(e, e)? != e {
                    return Err(ClaimFailure::new("type_c idempotent", format!("{e} is not idempotent")));
                }
                let samples = sampled_multiples(bound);
                let power = |x: &Element, k: u64| sg.power(x, k).map_err(|err| ClaimFailure::new("pattern", err.to_string()));
                let mut multiples = Vec::new();
                for c in &gens {
                    let mut ms: Vec<Element> = Vec::new();
                    for k in 1..=bound {
                        ms.push(power(c, k)?);
                    }
                    let mut with_e: Vec<&Element> = ms.iter().collect();
                    with_e.push(e);
                    distinct(&with_e, "type_c multiples")?;
                    multiples.push(ms);
                }
                for (i, mi) in multiples.iter().enumerate() {
                    for &m in &samples {
                        let x = &mi[m as usize - 1];
                        if add(e, x)? != *e || add(x, e)? != *e {
                            return Err(ClaimFailure::new("type_c absorption", format!("{e} does not absorb {x}")));
                        }
                        for (j, mj) in multiples.iter().enumerate() {
                            if i == j {
                                continue;
                            }
                            for &l in &samples {
                                if add(x, &mj[l as usize - 1])? != *e {
                                    return Err(ClaimFailure::new(
                                        "type_c cross sums",
                                        format!("{m}*c{} + {l}*c{} is not {e}", i + 1, j + 1),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn names_one<'a>(elements: &'a [NamedElement], name: &str) -> Result<&'a Element, ClaimFailure> {
    elements.iter().find(|e| e.name == name).map(|e| &e.element).ok_or_else(|| ClaimFailure::new(format!("element {name}"), "missing"))
}

fn named(prefix: &str, xs: &[Element]) -> Vec<NamedElement> {
    xs.iter().enumerate().map(|(i, x)| NamedElement { name: format!("{prefix}{}", i + 1), element: x.clone() }).collect()
}

fn horizon_elements(sg: &Semigroup, horizon: usize) -> Vec<Element> {
    sg.enumerate(horizon)
}

/// Searches the first `horizon` elements for `n` distinct ones whose sums
/// `s_i + s_j` (including `i = j`) take at most `c` values. Each element in
/// rank order seeds a greedy scan over later elements.
pub fn detect_type_a(sg: &Semigroup, n: usize, c: usize, horizon: usize) -> Result<Option<ForbiddenWitness>, SemigroupError> {
    if c == 0 || n <= c {
        return Ok(None);
    }
    let elems = horizon_elements(sg, horizon);
    for start in 0..elems.len() {
        if elems.len() - start < n {
            break;
        }
        let mut family: Vec<&Element> = Vec::with_capacity(n);
        let mut sums: BTreeSet<(u64, Element)> = BTreeSet::new();
        for x in &elems[start..] {
            let mut fresh = vec![sg.add_unchecked(x, x)?];
            for y in &family {
                fresh.push(sg.add_unchecked(x, y)?);
                fresh.push(sg.add_unchecked(y, x)?);
            }
            let mut next = sums.clone();
            next.extend(fresh.into_iter().map(|v| sg.rank_key(&v)));
            if next.len() > c {
                if family.is_empty() {
                    break;
                }
                continue;
            }
            sums = next;
            family.push(x);
            if family.len() == n {
                break;
            }
        }
        if family.len() < n {
            continue;
        }
        let family: Vec<Element> = family.into_iter().cloned().collect();
        let cap: Vec<Element> = sums.into_iter().map(|(_, v)| v).collect();
        let index: HashMap<&Element, usize> = cap.iter().enumerate().map(|(i, v)| (v, i + 1)).collect();
        let mut identities = Vec::new();
        for (i, x) in family.iter().enumerate() {
            for (j, y) in family.iter().enumerate() {
                let v = sg.add_unchecked(x, y)?;
                identities.push(Identity { lhs: format!("s{} + s{}", i + 1, j + 1), rhs: format!("k{}", index[&v]), value: v });
            }
        }
        let mut elements = named("s", &family);
        elements.extend(named("k", &cap));
        return Ok(Some(ForbiddenWitness {
            pattern: Pattern::TypeA,
            elements,
            identities,
            distinct: vec![(1..=n).map(|i| format!("s{i}")).collect()],
            multiple_bound: None,
            exactness: exactness(sg, Pattern::TypeA),
        }));
    }
    Ok(None)
}

/// Lex-least clique in rank order over `candidates` under `adjacent`.
fn least_clique(
    candidates: &[usize],
    size: usize,
    adjacent: &dyn Fn(usize, usize) -> bool,
    budget: &mut Budget,
) -> Option<Vec<usize>> {
    fn go(
        candidates: &[usize],
        from: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        adjacent: &dyn Fn(usize, usize) -> bool,
        budget: &mut Budget,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        for i in from..candidates.len() {
            if candidates.len() - i < size - chosen.len() {
                return false;
            }
            if !budget.tick() {
                return false;
            }
            let c = candidates[i];
            if chosen.iter().all(|&x| adjacent(x, c)) {
                chosen.push(c);
                if go(candidates, i + 1, size, chosen, adjacent, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(candidates, 0, size, &mut chosen, adjacent, budget).then_some(chosen)
}

/// Finds an idempotent center `e` and `n` further idempotents with
/// `l_i + l_j = e` for `i ≠ j` and `e + l_i = l_i + e = e`.
pub fn detect_type_b(sg: &Semigroup, n: usize, horizon: usize, budget: u64) -> Result<Option<ForbiddenWitness>, SemigroupError> {
    if n < 2 {
        return Ok(None);
    }
    let elems = horizon_elements(sg, horizon);
    let mut idem = Vec::new();
    for (i, x) in elems.iter().enumerate() {
        if &sg.add_unchecked(x, x)? == x {
            idem.push(i);
        }
    }
    let mut b = Budget::new(budget);
    for &e in &idem {
        let center = &elems[e];
        let mut leaves = Vec::new();
        for &f in &idem {
            if f != e && &sg.add_unchecked(center, &elems[f])? == center && &sg.add_unchecked(&elems[f], center)? == center {
                leaves.push(f);
            }
        }
        if leaves.len() < n {
            continue;
        }
        // pair sums are needed repeatedly; evaluate lazily and remember
        let memo = std::cell::RefCell::new(HashMap::new());
        let adjacent = |x: usize, y: usize| -> bool {
            *memo.borrow_mut().entry((x, y)).or_insert_with(|| {
                sg.add_unchecked(&elems[x], &elems[y]).is_ok_and(|v| &v == center)
                    && sg.add_unchecked(&elems[y], &elems[x]).is_ok_and(|v| &v == center)
            })
        };
        if let Some(clique) = least_clique(&leaves, n, &adjacent, &mut b) {
            let ls: Vec<Element> = clique.iter().map(|&i| elems[i].clone()).collect();
            return Ok(Some(type_b_witness(sg, center, &ls)));
        }
        if b.exhausted() {
            break;
        }
    }
    Ok(None)
}

fn type_b_witness(sg: &Semigroup, e: &Element, leaves: &[Element]) -> ForbiddenWitness {
    let mut elements = vec![NamedElement { name: "e".into(), element: e.clone() }];
    elements.extend(named("l", leaves));
    let id = |lhs: String, rhs: &str, value: &Element| Identity { lhs, rhs: rhs.into(), value: value.clone() };
    let mut identities = vec![id("e + e".into(), "e", e)];
    let n = leaves.len();
    for (i, l) in leaves.iter().enumerate() {
        let li = format!("l{}", i + 1);
        identities.push(id(format!("{li} + {li}"), &li, l));
        identities.push(id(format!("e + {li}"), "e", e));
        identities.push(id(format!("{li} + e"), "e", e));
        for j in 0..n {
            if j != i {
                identities.push(id(format!("{li} + l{}", j + 1), "e", e));
            }
        }
    }
    let mut group = vec!["e".to_string()];
    group.extend((1..=n).map(|i| format!("l{i}")));
    ForbiddenWitness {
        pattern: Pattern::TypeB,
        elements,
        identities,
        distinct: vec![group],
        multiple_bound: None,
        exactness: exactness(sg, Pattern::TypeB),
    }
}

/// Finds an idempotent `e` and `n` generators whose multiples `1..=B` are
/// distinct and differ from `e`, with `e` absorbing and cross sums of
/// sampled multiples of distinct generators equal to `e`.
pub fn detect_type_c(
    sg: &Semigroup,
    n: usize,
    bound: u64,
    horizon: usize,
    budget: u64,
) -> Result<Option<ForbiddenWitness>, SemigroupError> {
    if n < 2 || bound < 2 {
        return Ok(None);
    }
    let elems = horizon_elements(sg, horizon);
    let samples = sampled_multiples(bound);
    let mut idem = Vec::new();
    for (i, x) in elems.iter().enumerate() {
        if &sg.add_unchecked(x, x)? == x {
            idem.push(i);
        }
    }
    // multiples 1..=B of every element, or None when they repeat
    let mut multiples: Vec<Option<Vec<Element>>> = Vec::with_capacity(elems.len());
    for x in &elems {
        let mut ms = vec![x.clone()];
        let mut seen: HashSet<Element> = HashSet::from([x.clone()]);
        let mut ok = true;
        for _ in 2..=bound {
            let next = match sg.add_unchecked(ms.last().expect("nonempty"), x) {
                Ok(v) => v,
                Err(SemigroupError::Overflow(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            if !seen.insert(next.clone()) {
                ok = false;
                break;
            }
            ms.push(next);
        }
        multiples.push(ok.then_some(ms));
    }
    let mut b = Budget::new(budget);
    for &e in &idem {
        let ee = &elems[e];
        let mut gens = Vec::new();
        'cand: for (i, ms) in multiples.iter().enumerate() {
            let Some(ms) = ms else { continue };
            if ms.contains(ee) {
                continue;
            }
            for &m in &samples {
                let x = &ms[m as usize - 1];
                if &sg.add_unchecked(ee, x)? != ee || &sg.add_unchecked(x, ee)? != ee {
                    continue 'cand;
                }
            }
            gens.push(i);
        }
        if gens.len() < n {
            continue;
        }
        let memo = std::cell::RefCell::new(HashMap::new());
        let adjacent = |x: usize, y: usize| -> bool {
            *memo.borrow_mut().entry((x, y)).or_insert_with(|| {
                let (mx, my) = (multiples[x].as_ref().expect("candidate"), multiples[y].as_ref().expect("candidate"));
                samples.iter().all(|&m| {
                    samples.iter().all(|&l| {
                        let (a, c) = (&mx[m as usize - 1], &my[l as usize - 1]);
                        sg.add_unchecked(a, c).is_ok_and(|v| &v == ee) && sg.add_unchecked(c, a).is_ok_and(|v| &v == ee)
                    })
                })
            })
        };
        if let Some(clique) = least_clique(&gens, n, &adjacent, &mut b) {
            let cs: Vec<Element> = clique.iter().map(|&i| elems[i].clone()).collect();
            return Ok(Some(type_c_witness(sg, ee, &cs, bound)));
        }
        if b.exhausted() {
            break;
        }
    }
    Ok(None)
}

fn type_c_witness(sg: &Semigroup, e: &Element, gens: &[Element], bound: u64) -> ForbiddenWitness {
    let samples = sampled_multiples(bound);
    let mut elements = vec![NamedElement { name: "e".into(), element: e.clone() }];
    elements.extend(named("c", gens));
    let id = |lhs: String, rhs: &str| Identity { lhs, rhs: rhs.into(), value: e.clone() };
    let mut identities = vec![id("e + e".into(), "e")];
    let mut distinct = Vec::new();
    for i in 1..=gens.len() {
        let ci = format!("c{i}");
        let mut group: Vec<String> = (1..=bound).map(|k| mult(k, &ci)).collect();
        group.push("e".into());
        distinct.push(group);
        for &m in &samples {
            identities.push(id(format!("e + {}", mult(m, &ci)), "e"));
            identities.push(id(format!("{} + e", mult(m, &ci)), "e"));
            for j in 1..=gens.len() {
                if j != i {
                    for &l in &samples {
                        identities.push(id(format!("{} + {}", mult(m, &ci), mult(l, &format!("c{j}"))), "e"));
                    }
                }
            }
        }
    }
    ForbiddenWitness {
        pattern: Pattern::TypeC,
        elements,
        identities,
        distinct,
        multiple_bound: Some(bound),
        exactness: exactness(sg, Pattern::TypeC),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fs2Certificate {
    /// Stream positions of the bijective sumsequence, given as singletons.
    pub positions: Vec<usize>,
    pub prefix: Vec<Element>,
    pub fs2: FsSet,
    /// Shortest prefix length, at least the requested minimum, from which
    /// `FS≥2` no longer grows.
    pub stable_upto: usize,
}

impl Fs2Certificate {
    pub fn verify(&self, sg: &Semigroup) -> Result<(), ClaimFailure> {
        let p = SequencePrefix::new(sg, self.prefix.clone()).map_err(|e| ClaimFailure::new("fs2 prefix", e.to_string()))?;
        if !p.is_bijective() {
            return Err(ClaimFailure::new("fs2 prefix", "not bijective"));
        }
        if self.positions.len() != self.prefix.len() || self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ClaimFailure::new("fs2 positions", "must increase and match the prefix"));
        }
        if self.stable_upto == 0 || self.stable_upto >= self.prefix.len() {
            return Err(ClaimFailure::new("fs2 stability", "the set must survive at least one extension"));
        }
        let full = p.fs_ge2().map_err(|e| ClaimFailure::new("fs2 set", e.to_string()))?;
        if full != self.fs2 {
            return Err(ClaimFailure::new("fs2 set", "recorded set differs from the recomputed one"));
        }
        let early = p.slice(1, self.stable_upto).and_then(|q| q.fs_ge2()).map_err(|e| ClaimFailure::new("fs2 stability", e.to_string()))?;
        if early.len() != full.len() {
            return Err(ClaimFailure::new("fs2 stability", format!("{} sums at {} but {} at the end", early.len(), self.stable_upto, full.len())));
        }
        Ok(())
    }
}

/// Takes the first occurrence of each distinct stream value until `max_len`
/// terms are collected, and reports a certificate when `FS≥2` of some
/// prefix of length `≥ min_len` equals `FS≥2` of the whole.
pub fn fs2_certificate(stream: &SequencePrefix<'_>, min_len: usize, max_len: usize) -> Result<Option<Fs2Certificate>, FsError> {
    let sg = stream.semigroup();
    let max_len = max_len.min(DEFAULT_LENGTH_CAP);
    if min_len < 3 || max_len <= min_len {
        return Ok(None);
    }
    let mut seen = HashSet::new();
    let positions: Vec<usize> =
        (1..=stream.len()).filter(|&i| seen.insert(&stream.elements()[i - 1])).take(max_len).collect();
    if positions.len() < max_len {
        return Ok(None);
    }
    let p = stream.subsequence(&positions)?;
    // value-level FS and FS≥2 grown one term at a time
    let mut all: HashSet<Element> = HashSet::new();
    let mut two: HashSet<Element> = HashSet::new();
    let mut sizes = Vec::with_capacity(max_len);
    for b in p.elements() {
        let fresh = all.iter().map(|s| sg.add_unchecked(s, b)).collect::<Result<Vec<_>, _>>()?;
        two.extend(fresh.iter().cloned());
        all.extend(fresh);
        all.insert(b.clone());
        sizes.push(two.len());
    }
    let last = sizes[max_len - 1];
    let stable_upto = (min_len..max_len).find(|&l| sizes[l - 1] == last);
    let Some(stable_upto) = stable_upto else { return Ok(None) };
    Ok(Some(Fs2Certificate { positions, prefix: p.elements().to_vec(), fs2: p.fs_ge2()?, stable_upto }))
}

/// Search sizes used by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub type_a_size: usize,
    pub type_a_cap: usize,
    pub type_b_leaves: usize,
    pub type_c_generators: usize,
    pub type_c_bound: u64,
    pub fs2_min_len: usize,
    pub fs2_max_len: usize,
    pub budget: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            type_a_size: 16,
            type_a_cap: 8,
            type_b_leaves: 3,
            type_c_generators: 3,
            type_c_bound: 5,
            fs2_min_len: 3,
            fs2_max_len: 12,
            budget: crate::search::DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ObstructionFound { pattern: Pattern, witness: ForbiddenWitness },
    NoWitnessAtHorizon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub horizon: usize,
    pub options: ClassifyOptions,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Every pattern that was found, in the order A, B, C.
    pub witnesses: Vec<ForbiddenWitness>,
    /// Auxiliary evidence on the default stream; never scored as a pattern.
    pub fs2_certificate: Option<Fs2Certificate>,
}

impl ClassifyReport {
    pub fn obstruction(&self) -> Option<Pattern> {
        match &self.verdict {
            Verdict::ObstructionFound { pattern, .. } => Some(*pattern),
            Verdict::NoWitnessAtHorizon => None,
        }
    }

    pub fn verify(&self, sg: &Semigroup) -> Result<(), ClaimFailure> {
        for w in &self.witnesses {
            w.verify(sg)?;
        }
        match &self.verdict {
            Verdict::ObstructionFound { pattern, witness } => {
                if self.witnesses.first() != Some(witness) || witness.pattern != *pattern {
                    return Err(ClaimFailure::new("verdict", "does not name the first witness"));
                }
            }
            Verdict::NoWitnessAtHorizon => {
                if !self.witnesses.is_empty() {
                    return Err(ClaimFailure::new("verdict", "witnesses are listed but none is reported"));
                }
            }
        }
        if let Some(c) = &self.fs2_certificate {
            c.verify(sg)?;
        }
        Ok(())
    }
}

/// Runs the three detectors over the first `horizon` elements and an
/// `FS≥2` certificate search over the default stream.
pub fn classify(sg: &Semigroup, horizon: usize, options: ClassifyOptions) -> Result<ClassifyReport, FsError> {
    let o = options;
    let found = [
        detect_type_a(sg, o.type_a_size, o.type_a_cap, horizon)?,
        detect_type_b(sg, o.type_b_leaves, horizon, o.budget)?,
        detect_type_c(sg, o.type_c_generators, o.type_c_bound, horizon, o.budget)?,
    ];
    let witnesses: Vec<ForbiddenWitness> = found.into_iter().flatten().collect();
    let verdict = match witnesses.first() {
        Some(w) => Verdict::ObstructionFound { pattern: w.pattern, witness: w.clone() },
        None => Verdict::NoWitnessAtHorizon,
    };
    let stream = SequencePrefix::from_stream(sg, horizon, 0, 1)?;
    let fs2 = fs2_certificate(&stream, o.fs2_min_len, o.fs2_max_len)?;
    Ok(ClassifyReport { horizon, options, verdict, witnesses, fs2_certificate: fs2 })
}
