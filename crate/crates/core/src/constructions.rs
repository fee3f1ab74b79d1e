//! Horizon-bounded constructions: proper subsequences, the sumsequence
//! dichotomy, splitting into disjoint finite-sums sets, minimality probes,
//! right-ideal scans and length-determined sums.
//!
//! Every positive result is re-checked by an independent predicate before
//! it is returned with `verified: true`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::mix64;
use crate::fs::{fs_values, FsError, FsSet, MaskTable, PairCheck, SequencePrefix, SumsequencePrefix, SumsequenceRecord};
use crate::index::{shortlex_masks, IndexSet};
use crate::search::Budget;
use crate::semigroup::{Element, Semigroup, SemigroupError};
use crate::tails::{default_schedule, tail_intersection, HorizonReport, TailOptions};

/// Lookahead window for [`tail_to_proper`].
pub const TAIL_LOOKAHEAD: usize = 12;
/// Span of candidate blocks in [`sumsequence_dichotomy`].
pub const DICHOTOMY_WINDOW: usize = 6;
/// Largest block in [`sumsequence_dichotomy`].
pub const DICHOTOMY_MAX_BLOCK: usize = 3;
pub const MAX_IDEAL_CARRIER: usize = 16;
/// Horizons used for tail-intersection preconditions.
const PRECONDITION_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0} is not a group")]
    NotAGroup(&'static str),
    #[error("stream exhausted after {found} of {wanted} terms")]
    StreamExhausted { found: usize, wanted: usize },
    #[error("stream is not bijective")]
    NotBijective,
    #[error("tail intersection is stable and nonempty at horizon: {value:?}")]
    NonEmptyTailIntersection { value: Vec<Element> },
    #[error("prefix is not disjoint-proper: {first} and {second} have equal sums")]
    NotDisjointProper { first: IndexSet, second: IndexSet },
    #[error("prefix of length {len} is too short; need {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("tail intersection of the stream does not stabilize to a nonempty set")]
    NoStableBaseline,
    #[error("carrier is not closed: {x} + {y} leaves it")]
    NotASubsemigroup { x: Element, y: Element },
    #[error("carrier has {size} elements; at most {MAX_IDEAL_CARRIER} are supported")]
    CarrierTooLarge { size: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("constructed object failed independent verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Fs(#[from] FsError),
}

impl From<SemigroupError> for ConstructionError {
    fn from(e: SemigroupError) -> Self {
        ConstructionError::Fs(FsError::Semigroup(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightIdeal {
    pub elements: Vec<Element>,
    pub maximal_proper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeCandidate {
    pub strategy: String,
    pub sumsequence: SumsequenceRecord,
    pub report: HorizonReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LengthSums {
    /// Value of every ordered sum of each length `≥ 2`.
    Holds { values: Vec<(usize, Element)> },
    Violation { first: IndexSet, second: IndexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    ProperPrefix { sumsequence: SumsequenceRecord },
    /// `b_n + b_m = b_n` for all `n < m`.
    Type1 { sumsequence: SumsequenceRecord },
    /// `FS(b_1..b_n) ∩ (FS(b_1..b_n) + b_{n+1}) = ∅` for all `n`.
    Type2 { sumsequence: SumsequenceRecord },
    Inconclusive { explored: u64 },
    DisjointFamily { classes: Vec<Vec<usize>>, sets: Vec<FsSet> },
    IdealList { carrier: Vec<Element>, ideals: Vec<RightIdeal> },
    ProbeReport { baseline: HorizonReport, best: Option<ProbeCandidate>, improved: bool, candidates: u64 },
    LengthDetermined { result: LengthSums },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionResult {
    #[serde(flatten)]
    pub construction: Construction,
    pub budget_used: u64,
    pub verified: bool,
}

impl ConstructionResult {
    fn checked(construction: Construction, budget_used: u64, sg: &Semigroup, stream: &[Element]) -> Result<Self, ConstructionError> {
        verify_construction(&construction, sg, stream).map_err(ConstructionError::VerificationFailed)?;
        Ok(ConstructionResult { construction, budget_used, verified: true })
    }

    pub fn is_positive(&self) -> bool {
        match &self.construction {
            Construction::Inconclusive { .. } => false,
            Construction::ProbeReport { improved, .. } => *improved,
            Construction::LengthDetermined { result } => matches!(result, LengthSums::Holds { .. }),
            _ => true,
        }
    }
}

/// A proper subsequence of a bijective stream in a group, chosen greedily:
/// keep `A = FS(chosen) ∪ {0}` and take the next term outside `-A + A`.
pub fn group_proper_subsequence(stream: &SequencePrefix<'_>, k: usize) -> Result<ConstructionResult, ConstructionError> {
    let sg = stream.semigroup();
    if !sg.is_group() {
        return Err(ConstructionError::NotAGroup(sg.family_name()));
    }
    if k == 0 {
        return Err(ConstructionError::InvalidArgument("target length must be at least 1".into()));
    }
    if !stream.is_bijective() {
        return Err(ConstructionError::NotBijective);
    }
    let mut acc: HashSet<Element> = HashSet::from([sg.identity()?]);
    let mut chosen = Vec::with_capacity(k);
    let mut nodes = 0u64;
    for (j, b) in stream.elements().iter().enumerate() {
        if chosen.len() == k {
            break;
        }
        nodes += 1;
        // b ∈ -A + A iff a + b ∈ A for some a ∈ A
        let shifted = acc.iter().map(|a| sg.add_unchecked(a, b)).collect::<Result<Vec<_>, _>>()?;
        if shifted.iter().any(|s| acc.contains(s)) {
            continue;
        }
        acc.extend(shifted);
        chosen.push(j + 1);
    }
    if chosen.len() < k {
        return Err(ConstructionError::StreamExhausted { found: chosen.len(), wanted: k });
    }
    let s = SumsequencePrefix::of_positions(stream.clone(), &chosen)?;
    ConstructionResult::checked(Construction::ProperPrefix { sumsequence: s.record() }, nodes, sg, stream.elements())
}

/// Value sets used to test whether appending `b` keeps a prefix proper:
/// `ends[i]` holds `a_F` over `F ⊆ {1..=i}` with `max F = i`.
struct ProperExtender {
    terms: Vec<Element>,
    ends: Vec<HashSet<Element>>,
}

impl ProperExtender {
    fn new() -> Self {
        ProperExtender { terms: Vec::new(), ends: Vec::new() }
    }

    /// Sums over subsets of `terms[from..]`, with the empty sum as `None`.
    fn suffix_sums(&self, sg: &Semigroup, from: usize) -> Result<Vec<Option<Element>>, SemigroupError> {
        let mut out: Vec<Option<Element>> = vec![None];
        for t in &self.terms[from..] {
            let mut fresh = Vec::with_capacity(out.len());
            for s in &out {
                fresh.push(Some(match s {
                    None => t.clone(),
                    Some(v) => sg.add_unchecked(v, t)?,
                }));
            }
            out.extend(fresh);
        }
        Ok(out)
    }

    /// Whether `terms ++ [b]` is still proper.
    fn admits(&self, sg: &Semigroup, b: &Element) -> Result<bool, SemigroupError> {
        for i in 0..self.terms.len() {
            for g in self.suffix_sums(sg, i + 1)? {
                let right = match g {
                    None => b.clone(),
                    Some(v) => sg.add_unchecked(&v, b)?,
                };
                if self.ends[i].contains(&right) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn push(&mut self, sg: &Semigroup, b: Element) -> Result<(), SemigroupError> {
        let mut end: HashSet<Element> = HashSet::from([b.clone()]);
        for e in &self.ends {
            for v in e {
                end.insert(sg.add_unchecked(v, &b)?);
            }
        }
        self.terms.push(b);
        self.ends.push(end);
        Ok(())
    }

    fn fs(&self) -> HashSet<Element> {
        self.ends.iter().flatten().cloned().collect()
    }
}

fn precondition_report(stream: &SequencePrefix<'_>) -> Result<Option<HorizonReport>, FsError> {
    let schedule = default_schedule(stream.len().min(PRECONDITION_HORIZON));
    if schedule.is_empty() {
        return Ok(None);
    }
    tail_intersection(stream, &schedule, TailOptions::default()).map(Some)
}

/// A proper subsequence of a stream whose tail intersection is not stable
/// and nonempty. Each newly chosen term must keep the prefix proper, and the
/// finite sums chosen before it must miss the finite sums of the next
/// [`TAIL_LOOKAHEAD`] stream terms after it.
pub fn tail_to_proper(stream: &SequencePrefix<'_>, k: usize) -> Result<ConstructionResult, ConstructionError> {
    let sg = stream.semigroup();
    if k == 0 {
        return Err(ConstructionError::InvalidArgument("target length must be at least 1".into()));
    }
    if let Some(report) = precondition_report(stream)? {
        if let Some(v) = report.stable_value().filter(|v| !v.is_empty()) {
            return Err(ConstructionError::NonEmptyTailIntersection { value: v.to_vec() });
        }
    }
    let elems = stream.elements();
    let mut ext = ProperExtender::new();
    let mut chosen = Vec::with_capacity(k);
    let mut nodes = 0u64;
    for (j, b) in elems.iter().enumerate() {
        if chosen.len() == k {
            break;
        }
        nodes += 1;
        if !ext.admits(sg, b)? {
            continue;
        }
        if !chosen.is_empty() {
            let ahead = &elems[j + 1..(j + 1 + TAIL_LOOKAHEAD).min(elems.len())];
            if !ahead.is_empty() {
                let tail_fs = fs_values(sg, ahead, usize::MAX)?;
                if ext.fs().iter().any(|e| tail_fs.contains(e)) {
                    continue;
                }
            }
        }
        ext.push(sg, b.clone())?;
        chosen.push(j + 1);
    }
    if chosen.len() < k {
        return Err(ConstructionError::StreamExhausted { found: chosen.len(), wanted: k });
    }
    let s = SumsequencePrefix::of_positions(stream.clone(), &chosen)?;
    ConstructionResult::checked(Construction::ProperPrefix { sumsequence: s.record() }, nodes, sg, elems)
}

fn block_sum(sg: &Semigroup, elems: &[Element], mask: u64) -> Result<Element, SemigroupError> {
    let mut acc: Option<Element> = None;
    for (j, e) in elems.iter().enumerate() {
        if mask >> j & 1 == 1 {
            acc = Some(match acc {
                None => e.clone(),
                Some(a) => sg.add_unchecked(&a, e)?,
            });
        }
    }
    Ok(acc.expect("nonempty mask"))
}

struct Dichotomy<'a> {
    sg: &'a Semigroup,
    elems: &'a [Element],
    blocks: Vec<u64>,
    k: usize,
}

struct DichotomyState {
    masks: Vec<u64>,
    terms: Vec<Element>,
    /// `FS(b_1..b_n)` for the current `n`.
    fs: HashSet<Element>,
}

impl Dichotomy<'_> {
    /// Returns the blocks and which type held, or `None` when the subtree is
    /// exhausted or the budget runs out.
    fn dfs(&self, st: &mut DichotomyState, t1: bool, t2: bool, budget: &mut Budget) -> Result<Option<(Vec<u64>, bool)>, SemigroupError> {
        if st.masks.len() == self.k {
            return Ok(Some((st.masks.clone(), t1)));
        }
        let next = st.masks.last().map_or(0, |&m| crate::index::mask_max(m));
        for &rel in &self.blocks {
            let mask = rel << next;
            if crate::index::mask_max(mask) > self.elems.len() {
                continue;
            }
            if !budget.tick() {
                return Ok(None);
            }
            let b = block_sum(self.sg, self.elems, mask)?;
            let n1 = t1 && type1_extends(self.sg, &st.terms, &b)?;
            let shifted = st.fs.iter().map(|s| self.sg.add_unchecked(s, &b)).collect::<Result<Vec<_>, _>>()?;
            let n2 = t2 && shifted.iter().all(|v| !st.fs.contains(v));
            if !n1 && !n2 {
                continue;
            }
            let saved = st.fs.clone();
            st.fs.insert(b.clone());
            st.fs.extend(shifted);
            st.masks.push(mask);
            st.terms.push(b);
            if let Some(found) = self.dfs(st, n1, n2, budget)? {
                return Ok(Some(found));
            }
            st.masks.pop();
            st.terms.pop();
            st.fs = saved;
            if budget.exhausted() {
                return Ok(None);
            }
        }
        Ok(None)
    }
}

/// `x + b = x` for every earlier term `x`.
fn type1_extends(sg: &Semigroup, terms: &[Element], b: &Element) -> Result<bool, SemigroupError> {
    for x in terms {
        if &sg.add_unchecked(x, b)? != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches sumsequences of the stream, blocks of size at most
/// [`DICHOTOMY_MAX_BLOCK`] within [`DICHOTOMY_WINDOW`] positions of the
/// previous block, for `k` terms of type 1 or type 2. The search runs one
/// block deeper than reported, so a prefix that cannot be continued (such
/// as a trailing leaf after centers in the fan) is never returned.
pub fn sumsequence_dichotomy(stream: &SequencePrefix<'_>, k: usize, budget: u64) -> Result<ConstructionResult, ConstructionError> {
    let sg = stream.semigroup();
    if k < 2 {
        return Err(ConstructionError::InvalidArgument("the dichotomy needs k >= 2".into()));
    }
    let blocks: Vec<u64> = shortlex_masks(DICHOTOMY_WINDOW)
        .into_iter()
        .filter(|m| m.count_ones() as usize <= DICHOTOMY_MAX_BLOCK)
        .collect();
    let search = Dichotomy { sg, elems: stream.elements(), blocks, k: k + 1 };
    let mut st = DichotomyState { masks: Vec::new(), terms: Vec::new(), fs: HashSet::new() };
    let mut b = Budget::new(budget);
    let found = search.dfs(&mut st, true, true, &mut b)?;
    let construction = match found {
        None => {
            return Ok(ConstructionResult {
                construction: Construction::Inconclusive { explored: b.used() },
                budget_used: b.used(),
                verified: true,
            })
        }
        Some((masks, is_type1)) => {
            let sets = masks.into_iter().take(k).map(IndexSet::from_mask).collect();
            let record = SumsequencePrefix::new(stream.clone(), sets)?.record();
            if is_type1 {
                Construction::Type1 { sumsequence: record }
            } else {
                Construction::Type2 { sumsequence: record }
            }
        }
    };
    ConstructionResult::checked(construction, b.used(), sg, stream.elements())
}

/// Splits a disjoint-proper prefix by index residue mod `m` and returns the
/// finite-sums set of each class.
pub fn split_into_disjoint_ip(prefix: &SequencePrefix<'_>, m: usize) -> Result<ConstructionResult, ConstructionError> {
    let sg = prefix.semigroup();
    if m == 0 {
        return Err(ConstructionError::InvalidArgument("need at least one part".into()));
    }
    if prefix.len() < 2 * m {
        return Err(ConstructionError::TooShort { len: prefix.len(), needed: 2 * m });
    }
    if let PairCheck::Violation { first, second } = prefix.disjoint_proper_check()? {
        return Err(ConstructionError::NotDisjointProper { first, second });
    }
    let classes: Vec<Vec<usize>> = (0..m).map(|r| (1..=prefix.len()).filter(|i| (i - 1) % m == r).collect()).collect();
    let sets = classes
        .iter()
        .map(|c| prefix.subsequence(c)?.fs_set())
        .collect::<Result<Vec<_>, _>>()?;
    ConstructionResult::checked(Construction::DisjointFamily { classes, sets }, prefix.len() as u64, sg, prefix.elements())
}

/// Candidate index-set families tried by [`minimality_probe`], cheapest
/// first.
fn probe_candidates(len: usize, trials: usize, seed: u64) -> Vec<(String, Vec<IndexSet>)> {
    let mut out = Vec::new();
    for d in 1..=8usize {
        for o in 1..=d {
            if d == 1 {
                continue;
            }
            let sets: Vec<IndexSet> = (o..=len).step_by(d).map(IndexSet::singleton).collect();
            out.push((format!("subsequence stride {d} offset {o}"), sets));
        }
    }
    for size in 2..=3usize {
        let sets: Vec<IndexSet> = (0..len / size).map(|i| IndexSet::range(i * size + 1, (i + 1) * size)).collect();
        out.push((format!("consecutive blocks of {size}"), sets));
    }
    for t in 0..trials {
        let mut state = seed ^ (t as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
        let mut next = || {
            state = state.wrapping_add(1);
            mix64(state)
        };
        let mut sets = Vec::new();
        let mut pos = 1 + (next() % 3) as usize;
        loop {
            let size = 1 + (next() % 3) as usize;
            if pos + size - 1 > len {
                break;
            }
            sets.push(IndexSet::range(pos, pos + size - 1));
            pos += size + (next() % 3) as usize;
        }
        out.push((format!("random trial {t}"), sets));
    }
    out
}

/// Looks for a sumsequence whose stabilized tail intersection is a strict
/// subset of the stream's, keeping the smallest found. `budget` caps the
/// number of candidates evaluated.
pub fn minimality_probe(stream: &SequencePrefix<'_>, trials: usize, budget: u64, seed: u64) -> Result<ConstructionResult, ConstructionError> {
    let sg = stream.semigroup();
    let baseline = precondition_report(stream)?.ok_or(ConstructionError::NoStableBaseline)?;
    let Some(base_value) = baseline.stable_value().filter(|v| !v.is_empty()).map(<[Element]>::to_vec) else {
        return Err(ConstructionError::NoStableBaseline);
    };
    let base_set: HashSet<&Element> = base_value.iter().collect();
    let mut best: Option<ProbeCandidate> = None;
    let mut evaluated = 0u64;
    for (strategy, sets) in probe_candidates(stream.len(), trials, seed) {
        if evaluated >= budget {
            break;
        }
        if sets.len() < 4 {
            continue;
        }
        evaluated += 1;
        let s = SumsequencePrefix::new(stream.clone(), sets)?;
        let derived = s.derived_prefix();
        if !sg.is_finite() && !derived.is_bijective() {
            continue;
        }
        let Some(report) = precondition_report(&derived)? else { continue };
        let Some(value) = report.stable_value().filter(|v| !v.is_empty()) else { continue };
        let strict = value.len() < base_value.len() && value.iter().all(|e| base_set.contains(e));
        let better = best.as_ref().is_none_or(|b| value.len() < b.report.stable_value().map_or(usize::MAX, <[Element]>::len));
        if strict && better {
            let done = value.len() == 1;
            best = Some(ProbeCandidate { strategy, sumsequence: s.record(), report });
            if done {
                break;
            }
        }
    }
    let improved = best.is_some();
    let c = Construction::ProbeReport { baseline, best, improved, candidates: evaluated };
    ConstructionResult::checked(c, evaluated, sg, stream.elements())
}

/// All nonempty `R ⊆ T` with `R + T ⊆ R`, by size then shortlex over the
/// carrier in rank order.
pub fn right_ideal_scan(sg: &Semigroup, carrier: &[Element]) -> Result<ConstructionResult, ConstructionError> {
    let mut t: Vec<Element> = carrier.to_vec();
    for e in &t {
        sg.validate(e)?;
    }
    t.sort_by_cached_key(|e| sg.rank_key(e));
    t.dedup();
    if t.is_empty() {
        return Err(ConstructionError::InvalidArgument("carrier is empty".into()));
    }
    if t.len() > MAX_IDEAL_CARRIER {
        return Err(ConstructionError::CarrierTooLarge { size: t.len() });
    }
    let index: std::collections::HashMap<&Element, usize> = t.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut right = vec![0u64; t.len()];
    for (i, x) in t.iter().enumerate() {
        for y in &t {
            let s = sg.add_unchecked(x, y)?;
            match index.get(&s) {
                Some(&j) => right[i] |= 1 << j,
                None => return Err(ConstructionError::NotASubsemigroup { x: x.clone(), y: y.clone() }),
            }
        }
    }
    let full = (1u64 << t.len()) - 1;
    let ideals: Vec<u64> = shortlex_masks(t.len())
        .into_iter()
        .filter(|&r| (0..t.len()).all(|i| r >> i & 1 == 0 || right[i] & !r == 0))
        .collect();
    let list = ideals
        .iter()
        .map(|&r| RightIdeal {
            elements: (0..t.len()).filter(|i| r >> i & 1 == 1).map(|i| t[i].clone()).collect(),
            maximal_proper: r != full && !ideals.iter().any(|&o| o != full && o != r && o & r == r),
        })
        .collect();
    let c = Construction::IdealList { carrier: t.clone(), ideals: list };
    ConstructionResult::checked(c, ideals.len() as u64, sg, &[])
}

/// Whether each ordered sum of length `≥ 2` is determined by its length.
pub fn length_determined_check(prefix: &SequencePrefix<'_>) -> Result<ConstructionResult, ConstructionError> {
    let sg = prefix.semigroup();
    if prefix.len() > prefix.cap() {
        return Err(FsError::PrefixTooLong { len: prefix.len(), cap: prefix.cap() }.into());
    }
    let table = MaskTable::build(sg, prefix.elements())?;
    let mut values = Vec::new();
    let mut result = None;
    let mut reference: Option<(u32, u64)> = None;
    for m in shortlex_masks(prefix.len()) {
        let size = m.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let id = table.ids[m as usize];
        match reference {
            Some((rid, rm)) if rm.count_ones() as usize == size => {
                if rid != id {
                    result = Some(LengthSums::Violation { first: IndexSet::from_mask(rm), second: IndexSet::from_mask(m) });
                    break;
                }
            }
            _ => {
                reference = Some((id, m));
                values.push((size, table.values[id as usize].clone()));
            }
        }
    }
    let result = result.unwrap_or(LengthSums::Holds { values });
    let c = Construction::LengthDetermined { result };
    ConstructionResult::checked(c, 1u64 << prefix.len(), sg, prefix.elements())
}

/// Independent re-check of a construction against the stream it was built
/// from.
pub fn verify_construction(c: &Construction, sg: &Semigroup, stream: &[Element]) -> Result<(), String> {
    let err = |e: FsError| e.to_string();
    let rebuild = |rec: &SumsequenceRecord| -> Result<Vec<Element>, String> {
        let base = SequencePrefix::new(sg, stream.to_vec()).map_err(err)?;
        let s = SumsequencePrefix::new(base, rec.index_sets.clone()).map_err(err)?;
        if s.derived() != rec.elements.as_slice() {
            return Err("recorded terms do not match their index sets".into());
        }
        Ok(rec.elements.clone())
    };
    match c {
        Construction::ProperPrefix { sumsequence } => {
            let terms = rebuild(sumsequence)?;
            let p = SequencePrefix::new(sg, terms).map_err(err)?;
            match p.is_proper().map_err(err)? {
                PairCheck::Holds => Ok(()),
                PairCheck::Violation { first, second } => Err(format!("{first} and {second} have equal sums")),
            }
        }
        Construction::Type1 { sumsequence } => {
            let terms = rebuild(sumsequence)?;
            for n in 0..terms.len() {
                for m in n + 1..terms.len() {
                    let v = sg.add(&terms[n], &terms[m]).map_err(|e| e.to_string())?;
                    if v != terms[n] {
                        return Err(format!("b_{} + b_{} = {v}, not b_{}", n + 1, m + 1, n + 1));
                    }
                }
            }
            Ok(())
        }
        Construction::Type2 { sumsequence } => {
            let terms = rebuild(sumsequence)?;
            for n in 1..terms.len() {
                let fs = fs_values(sg, &terms[..n], usize::MAX).map_err(err)?;
                for s in &fs {
                    let v = sg.add(s, &terms[n]).map_err(|e| e.to_string())?;
                    if fs.contains(&v) {
                        return Err(format!("{v} lies in FS(b_1..b_{n}) and in FS(b_1..b_{n}) + b_{}", n + 1));
                    }
                }
            }
            Ok(())
        }
        Construction::Inconclusive { .. } => Ok(()),
        Construction::DisjointFamily { classes, sets } => {
            let base = SequencePrefix::new(sg, stream.to_vec()).map_err(err)?;
            if classes.len() != sets.len() {
                return Err("one set per class is required".into());
            }
            let mut seen: HashSet<usize> = HashSet::new();
            for (c, s) in classes.iter().zip(sets) {
                let sub = base.subsequence(c).map_err(err)?;
                if !sub.is_bijective() {
                    return Err(format!("class {c:?} is not bijective"));
                }
                if c.iter().any(|i| !seen.insert(*i)) {
                    return Err("classes overlap".into());
                }
                let fs = sub.fs_set().map_err(err)?;
                let a: HashSet<&Element> = fs.elements().collect();
                let b: HashSet<&Element> = s.elements().collect();
                if a != b {
                    return Err(format!("recorded finite sums of class {c:?} are wrong"));
                }
            }
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    if !sets[i].is_disjoint(&sets[j]) {
                        return Err(format!("sets {} and {} intersect", i + 1, j + 1));
                    }
                }
            }
            Ok(())
        }
        Construction::IdealList { carrier, ideals } => {
            let members: HashSet<&Element> = carrier.iter().collect();
            let mut brute = Vec::new();
            for m in shortlex_masks(carrier.len()) {
                let r: Vec<&Element> = (0..carrier.len()).filter(|i| m >> i & 1 == 1).map(|i| &carrier[i]).collect();
                let rs: HashSet<&Element> = r.iter().copied().collect();
                let mut ok = true;
                for x in &r {
                    for y in carrier {
                        let v = sg.add(x, y).map_err(|e| e.to_string())?;
                        if !members.contains(&v) {
                            return Err(format!("carrier is not closed at {x} + {y}"));
                        }
                        ok &= rs.contains(&v);
                    }
                }
                if ok {
                    brute.push(r.into_iter().cloned().collect::<Vec<_>>());
                }
            }
            let listed: Vec<Vec<Element>> = ideals.iter().map(|i| i.elements.clone()).collect();
            if listed != brute {
                return Err("ideal list differs from brute force".into());
            }
            for i in ideals {
                let proper = i.elements.len() < carrier.len();
                let larger = ideals.iter().any(|o| {
                    o.elements.len() > i.elements.len()
                        && o.elements.len() < carrier.len()
                        && i.elements.iter().all(|e| o.elements.contains(e))
                });
                if i.maximal_proper != (proper && !larger) {
                    return Err(format!("maximality flag of {:?} is wrong", i.elements));
                }
            }
            Ok(())
        }
        Construction::ProbeReport { baseline, best, improved, .. } => {
            let base = SequencePrefix::new(sg, stream.to_vec()).map_err(err)?;
            let again = precondition_report(&base).map_err(err)?.ok_or("stream too short for a baseline")?;
            if &again != baseline {
                return Err("baseline report does not replay".into());
            }
            if *improved != best.is_some() {
                return Err("improvement flag disagrees with the candidate".into());
            }
            if let Some(b) = best {
                let terms = rebuild(&b.sumsequence)?;
                let d = SequencePrefix::new(sg, terms).map_err(err)?;
                let rep = precondition_report(&d).map_err(err)?.ok_or("candidate too short")?;
                if rep != b.report {
                    return Err("candidate report does not replay".into());
                }
                let bv: HashSet<&Element> = baseline.stable_value().unwrap_or(&[]).iter().collect();
                let cv = rep.stable_value().ok_or("candidate is not stable")?;
                if cv.is_empty() || cv.len() >= bv.len() || !cv.iter().all(|e| bv.contains(e)) {
                    return Err("candidate tail intersection is not a strict nonempty subset".into());
                }
            }
            Ok(())
        }
        Construction::LengthDetermined { result } => {
            let p = SequencePrefix::new(sg, stream.to_vec()).map_err(err)?;
            match result {
                LengthSums::Violation { first, second } => {
                    if first.len() != second.len() || first.len() < 2 {
                        return Err("violation sets must share a length of at least 2".into());
                    }
                    if p.sum_over(first).map_err(err)? == p.sum_over(second).map_err(err)? {
                        return Err("violation sets have equal sums".into());
                    }
                    Ok(())
                }
                LengthSums::Holds { values } => {
                    let expected: Vec<usize> = (2..=p.len()).collect();
                    if values.iter().map(|(l, _)| *l).collect::<Vec<_>>() != expected {
                        return Err("every length from 2 up must be listed".into());
                    }
                    // naive: every subset of each length, folded directly
                    for m in shortlex_masks(p.len()) {
                        let size = m.count_ones() as usize;
                        if size < 2 {
                            continue;
                        }
                        let v = p.sum_over(&IndexSet::from_mask(m)).map_err(err)?;
                        if v != values[size - 2].1 {
                            return Err(format!("sum over {} is {v}", IndexSet::from_mask(m)));
                        }
                    }
                    Ok(())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::SemigroupSpec;

    fn sg(spec: SemigroupSpec) -> Semigroup {
        Semigroup::new(spec).unwrap()
    }

    fn nat(n: u64) -> Element {
        Element::Nat(n)
    }

    fn unit(i: u64) -> Element {
        Element::Vector(vec![(i, 1)])
    }

    fn terms(r: &ConstructionResult) -> Vec<Element> {
        match &r.construction {
            Construction::ProperPrefix { sumsequence }
            | Construction::Type1 { sumsequence }
            | Construction::Type2 { sumsequence } => sumsequence.elements.clone(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_vectors_are_already_proper() {
        let g = sg(SemigroupSpec::DirectSumGroup { p: 3 });
        let stream = SequencePrefix::new(&g, (1..=12).map(unit).collect()).unwrap();
        let r = group_proper_subsequence(&stream, 12).unwrap();
        assert_eq!(terms(&r), stream.elements());
        assert!(r.verified);
    }

    #[test]
    fn planted_collision_is_skipped() {
        let g = sg(SemigroupSpec::DirectSumGroup { p: 2 });
        let mut v = vec![unit(1), Element::Vector(vec![(1, 1), (2, 1)]), unit(2)];
        v.extend((3..=10).map(unit));
        let stream = SequencePrefix::new(&g, v).unwrap();
        let r = group_proper_subsequence(&stream, 8).unwrap();
        assert!(!terms(&r).contains(&unit(2)));
        assert!(matches!(
            group_proper_subsequence(&SequencePrefix::from_stream(&sg(SemigroupSpec::Naturals), 5, 0, 1).unwrap(), 2),
            Err(ConstructionError::NotAGroup(_))
        ));
    }

    #[test]
    fn tails_to_proper() {
        let n = sg(SemigroupSpec::Naturals);
        let stream = SequencePrefix::from_stream(&n, 600, 0, 1).unwrap();
        let r = tail_to_proper(&stream, 10).unwrap();
        assert_eq!(terms(&r), (0..10).map(|i| nat(1 << i)).collect::<Vec<_>>());

        let fan = sg(SemigroupSpec::Fan);
        let s = SequencePrefix::from_stream(&fan, 64, 1, 1).unwrap();
        assert_eq!(
            tail_to_proper(&s, 5).unwrap_err(),
            ConstructionError::NonEmptyTailIntersection { value: vec![nat(1)] }
        );
        let constant = SequencePrefix::new(&fan, vec![nat(7); 64]).unwrap();
        assert_eq!(
            tail_to_proper(&constant, 3).unwrap_err(),
            ConstructionError::NonEmptyTailIntersection { value: vec![nat(7)] }
        );
    }

    #[test]
    fn dichotomy_cases() {
        let lz = sg(SemigroupSpec::LeftZero);
        let r = sumsequence_dichotomy(&SequencePrefix::from_stream(&lz, 30, 0, 1).unwrap(), 5, 100_000).unwrap();
        assert!(matches!(r.construction, Construction::Type1 { .. }));

        let n = sg(SemigroupSpec::Naturals);
        let pow = SequencePrefix::new(&n, (0..12).map(|i| nat(1 << i)).collect()).unwrap();
        let r = sumsequence_dichotomy(&pow, 5, 100_000).unwrap();
        assert!(matches!(r.construction, Construction::Type2 { .. }));

        let fan = sg(SemigroupSpec::Fan);
        let r = sumsequence_dichotomy(&SequencePrefix::from_stream(&fan, 30, 1, 1).unwrap(), 4, 100_000).unwrap();
        let Construction::Type1 { sumsequence } = &r.construction else { panic!("{r:?}") };
        assert!(sumsequence.index_sets.iter().all(|f| f.len() == 2), "{sumsequence:?}");
        assert_eq!(sumsequence.elements, vec![nat(1); 4]);

        let r = sumsequence_dichotomy(&SequencePrefix::from_stream(&fan, 30, 1, 1).unwrap(), 4, 10).unwrap();
        assert!(matches!(r.construction, Construction::Inconclusive { .. }));
    }

    #[test]
    fn split_powers_of_two() {
        let n = sg(SemigroupSpec::Naturals);
        let p = SequencePrefix::new(&n, [1, 2, 4, 8, 16, 32].map(nat).to_vec()).unwrap();
        let r = split_into_disjoint_ip(&p, 3).unwrap();
        let Construction::DisjointFamily { sets, .. } = &r.construction else { panic!() };
        let got: Vec<Vec<Element>> = sets.iter().map(|s| s.elements().cloned().collect()).collect();
        assert_eq!(got, vec![[1, 8, 9].map(nat).to_vec(), [2, 16, 18].map(nat).to_vec(), [4, 32, 36].map(nat).to_vec()]);
        let one = split_into_disjoint_ip(&p, 1).unwrap();
        let Construction::DisjointFamily { sets, .. } = &one.construction else { panic!() };
        assert_eq!(sets[0], p.fs_set().unwrap());
        let fan = sg(SemigroupSpec::Fan);
        let fp = SequencePrefix::from_stream(&fan, 6, 1, 1).unwrap();
        assert!(matches!(split_into_disjoint_ip(&fp, 2), Err(ConstructionError::NotDisjointProper { .. })));
        assert!(matches!(split_into_disjoint_ip(&p, 4), Err(ConstructionError::TooShort { .. })));
    }

    #[test]
    fn probes() {
        let z4 = sg(SemigroupSpec::NatModK { k: 4 });
        let s = SequencePrefix::from_stream(&z4, 256, 0, 1).unwrap();
        let r = minimality_probe(&s, 4, 1000, 7).unwrap();
        let Construction::ProbeReport { best: Some(best), improved: true, .. } = &r.construction else { panic!("{r:?}") };
        assert_eq!(best.report.stable_value().unwrap(), &[nat(0)]);

        let z5 = sg(SemigroupSpec::NatModK { k: 5 });
        let s = SequencePrefix::from_stream(&z5, 256, 0, 5).unwrap();
        let r = minimality_probe(&s, 4, 1000, 7).unwrap();
        assert!(matches!(r.construction, Construction::ProbeReport { improved: false, .. }));

        let n = sg(SemigroupSpec::Naturals);
        let s = SequencePrefix::from_stream(&n, 64, 0, 1).unwrap();
        assert_eq!(minimality_probe(&s, 4, 1000, 7).unwrap_err(), ConstructionError::NoStableBaseline);
    }

    #[test]
    fn ideals() {
        let z5 = sg(SemigroupSpec::NatModK { k: 5 });
        let r = right_ideal_scan(&z5, &[nat(0)]).unwrap();
        let Construction::IdealList { ideals, .. } = &r.construction else { panic!() };
        assert_eq!(ideals.len(), 1);

        let z4 = sg(SemigroupSpec::NatModK { k: 4 });
        let r = right_ideal_scan(&z4, &z4.enumerate(4)).unwrap();
        let Construction::IdealList { ideals, .. } = &r.construction else { panic!() };
        assert_eq!(ideals.len(), 1);
        assert!(!ideals[0].maximal_proper);

        let lz = sg(SemigroupSpec::LeftZero);
        let r = right_ideal_scan(&lz, &[nat(1), nat(2)]).unwrap();
        let Construction::IdealList { ideals, .. } = &r.construction else { panic!() };
        let sets: Vec<Vec<Element>> = ideals.iter().map(|i| i.elements.clone()).collect();
        assert_eq!(sets, vec![vec![nat(1)], vec![nat(2)], vec![nat(1), nat(2)]]);
        assert!(ideals[0].maximal_proper && ideals[1].maximal_proper);

        assert!(matches!(right_ideal_scan(&z5, &[nat(1)]), Err(ConstructionError::NotASubsemigroup { .. })));
        let big: Vec<Element> = (1..=17).map(nat).collect();
        assert!(matches!(right_ideal_scan(&lz, &big), Err(ConstructionError::CarrierTooLarge { size: 17 })));
    }

    #[test]
    fn length_sums() {
        let fan = sg(SemigroupSpec::Fan);
        let r = length_determined_check(&SequencePrefix::new(&fan, [2, 3, 4, 5].map(nat).to_vec()).unwrap()).unwrap();
        assert_eq!(
            r.construction,
            Construction::LengthDetermined { result: LengthSums::Holds { values: vec![(2, nat(1)), (3, nat(1)), (4, nat(1))] } }
        );
        let n = sg(SemigroupSpec::Naturals);
        let r = length_determined_check(&SequencePrefix::new(&n, [1, 2, 4].map(nat).to_vec()).unwrap()).unwrap();
        assert!(matches!(r.construction, Construction::LengthDetermined { result: LengthSums::Violation { .. } }));
        let lz = sg(SemigroupSpec::LeftZero);
        let r = length_determined_check(&SequencePrefix::new(&lz, [1, 2, 3].map(nat).to_vec()).unwrap()).unwrap();
        assert!(!r.is_positive());
    }

    #[test]
    fn tampering_is_caught() {
        let n = sg(SemigroupSpec::Naturals);
        let pow = SequencePrefix::new(&n, (0..8).map(|i| nat(1 << i)).collect()).unwrap();
        let r = sumsequence_dichotomy(&pow, 4, 10_000).unwrap();
        let mut c = r.construction.clone();
        if let Construction::Type2 { sumsequence } = &mut c {
            sumsequence.elements[1] = nat(3);
        }
        assert!(verify_construction(&c, &n, pow.elements()).is_err());
    }
}
