//! Finite prefixes of sequences, their finite-sums sets, and the
//! properness predicates.
//!
//! Sums always fold left to right by index, so nothing here assumes
//! commutativity.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::index::{mask_max, mask_min, shortlex_cmp, shortlex_masks, IndexSet};
use crate::semigroup::{Element, Semigroup, SemigroupError};

/// Default bound on prefix length for exhaustive subset computations.
pub const DEFAULT_LENGTH_CAP: usize = 22;
/// Hard ceiling on the configurable cap.
pub const MAX_LENGTH_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsError {
    #[error("index {index} out of range for a prefix of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("prefix length {len} exceeds the cap {cap}")]
    PrefixTooLong { len: usize, cap: usize },
    #[error("a prefix needs at least one element")]
    EmptyPrefix,
    #[error("split must lie in 1..{len}, got {split}")]
    InvalidSplit { split: usize, len: usize },
    #[error("index sets are not increasing: {0}")]
    NotIncreasing(String),
    #[error("more than {limit} distinct sums")]
    TooManySums { limit: usize },
    #[error("invalid horizon schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Each reachable sum with the mask of its least witness.
type WitnessMap = HashMap<Element, u64>;

/// A finite prefix `a_1, …, a_n` of a sequence in a fixed semigroup.
#[derive(Debug, Clone)]
pub struct SequencePrefix<'s> {
    semigroup: &'s Semigroup,
    elements: Vec<Element>,
    cap: usize,
}

impl<'s> SequencePrefix<'s> {
    pub fn new(semigroup: &'s Semigroup, elements: Vec<Element>) -> Result<Self, FsError> {
        if elements.is_empty() {
            return Err(FsError::EmptyPrefix);
        }
        for e in &elements {
            semigroup.validate(e)?;
        }
        Ok(SequencePrefix { semigroup, elements, cap: DEFAULT_LENGTH_CAP })
    }

    /// The first `len` terms of the family's default stream.
    pub fn from_stream(semigroup: &'s Semigroup, len: usize, skip: u64, stride: u64) -> Result<Self, FsError> {
        SequencePrefix::new(semigroup, semigroup.stream(len, skip, stride))
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.min(MAX_LENGTH_CAP);
        self
    }

    pub fn semigroup(&self) -> &'s Semigroup {
        self.semigroup
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Element> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `a_i`, 1-based.
    pub fn get(&self, i: usize) -> Option<&Element> {
        i.checked_sub(1).and_then(|j| self.elements.get(j))
    }

    /// The terms at the given 1-based positions, in order.
    pub fn subsequence(&self, positions: &[usize]) -> Result<SequencePrefix<'s>, FsError> {
        let elements = positions
            .iter()
            .map(|&i| self.get(i).cloned().ok_or(FsError::IndexOutOfRange { index: i, len: self.len() }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SequencePrefix::new(self.semigroup, elements)?.with_cap(self.cap))
    }

    /// `a_lo, …, a_hi`, 1-based inclusive.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<SequencePrefix<'s>, FsError> {
        if lo == 0 || hi > self.len() || lo > hi {
            return Err(FsError::IndexOutOfRange { index: if lo == 0 { 0 } else { hi }, len: self.len() });
        }
        Ok(SequencePrefix { semigroup: self.semigroup, elements: self.elements[lo - 1..hi].to_vec(), cap: self.cap })
    }

    fn check_cap(&self) -> Result<(), FsError> {
        if self.len() > self.cap {
            Err(FsError::PrefixTooLong { len: self.len(), cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// `a_F`, folded left to right.
    pub fn sum_over(&self, f: &IndexSet) -> Result<Element, FsError> {
        if f.max() > self.len() {
            return Err(FsError::IndexOutOfRange { index: f.max(), len: self.len() });
        }
        let mut it = f.indices().iter().map(|&i| &self.elements[i - 1]);
        let first = it.next().expect("nonempty").clone();
        it.try_fold(first, |acc, x| self.semigroup.add_unchecked(&acc, x)).map_err(FsError::from)
    }

    /// `FS(a_1, …, a_n)` with shortlex-least witnesses.
    pub fn fs_set(&self) -> Result<FsSet, FsError> {
        self.check_cap()?;
        let (all, _) = self.witness_dp(false)?;
        Ok(FsSet::from_masks(self.semigroup, all))
    }

    /// `{a_F : |F| ≥ 2}` with shortlex-least witnesses of size at least 2.
    pub fn fs_ge2(&self) -> Result<FsSet, FsError> {
        self.check_cap()?;
        let (_, ge2) = self.witness_dp(true)?;
        Ok(FsSet::from_masks(self.semigroup, ge2))
    }

    /// Suffix DP: after step `j`, the maps hold every sum over subsets of
    /// `{j+1, …, n}` (1-based) with its least witness.
    fn witness_dp(&self, want_ge2: bool) -> Result<(WitnessMap, WitnessMap), FsError> {
        let mut all: HashMap<Element, u64> = HashMap::new();
        let mut ge2: HashMap<Element, u64> = HashMap::new();
        for j in (0..self.len()).rev() {
            let a = &self.elements[j];
            let bit = 1u64 << j;
            let mut fresh = Vec::with_capacity(all.len() + 1);
            for (s, &m) in &all {
                fresh.push((self.semigroup.add_unchecked(a, s)?, m | bit));
            }
            if want_ge2 {
                for (v, m) in &fresh {
                    insert_least(&mut ge2, v.clone(), *m);
                }
            }
            insert_least(&mut all, a.clone(), bit);
            for (v, m) in fresh {
                insert_least(&mut all, v, m);
            }
        }
        Ok((all, ge2))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        self.elements.iter().all(|e| seen.insert(e))
    }

    /// `proper` iff `a_F1 ≠ a_F2` for all `F1 < F2`; otherwise the least
    /// violating pair (least `F1`, then least `F2`).
    pub fn is_proper(&self) -> Result<PairCheck, FsError> {
        self.check_cap()?;
        let table = MaskTable::build(self.semigroup, &self.elements)?;
        let order = shortlex_masks(self.len());
        // for each value, the largest minimum index among its witnesses
        let mut maxmin = vec![0usize; table.values.len()];
        for &m in &order {
            let id = table.ids[m as usize] as usize;
            maxmin[id] = maxmin[id].max(mask_min(m));
        }
        for &f in &order {
            let id = table.ids[f as usize];
            if maxmin[id as usize] > mask_max(f) {
                let g = order
                    .iter()
                    .copied()
                    .find(|&g| table.ids[g as usize] == id && mask_min(g) > mask_max(f))
                    .expect("maxmin guarantees a partner");
                return Ok(PairCheck::violation(f, g));
            }
        }
        Ok(PairCheck::Holds)
    }

    /// Holds iff `a_F ≠ a_G` for all disjoint nonempty `F, G`; otherwise
    /// the least violating pair.
    pub fn disjoint_proper_check(&self) -> Result<PairCheck, FsError> {
        self.check_cap()?;
        let table = MaskTable::build(self.semigroup, &self.elements)?;
        let order = shortlex_masks(self.len());
        let mut groups: Vec<Vec<u64>> = vec![Vec::new(); table.values.len()];
        let mut common: Vec<u64> = vec![u64::MAX; table.values.len()];
        for &m in &order {
            let id = table.ids[m as usize] as usize;
            groups[id].push(m);
            common[id] &= m;
        }
        for &f in &order {
            let id = table.ids[f as usize] as usize;
            // members sharing an index can never be disjoint
            if common[id] != 0 {
                continue;
            }
            if let Some(&g) = groups[id].iter().find(|&&g| g & f == 0) {
                return Ok(PairCheck::violation(f, g));
            }
        }
        Ok(PairCheck::Holds)
    }

    /// Self-test of [`SequencePrefix::fs_set`]: compares it with
    /// `FS(head) ∪ FS(tail) ∪ (FS(head) + FS(tail))`, each side computed by
    /// an independent subset table.
    pub fn fs_decomposition_check(&self, split: usize) -> Result<bool, FsError> {
        self.check_cap()?;
        if split == 0 || split >= self.len() {
            return Err(FsError::InvalidSplit { split, len: self.len() });
        }
        let lhs: HashSet<Element> = self.fs_set()?.elements().cloned().collect();
        let head = MaskTable::build(self.semigroup, &self.elements[..split])?.distinct();
        let tail = MaskTable::build(self.semigroup, &self.elements[split..])?.distinct();
        let mut rhs: HashSet<Element> = head.iter().chain(tail.iter()).cloned().collect();
        for h in &head {
            for t in &tail {
                rhs.insert(self.semigroup.add_unchecked(h, t)?);
            }
        }
        Ok(lhs == rhs)
    }
}

fn insert_least(map: &mut HashMap<Element, u64>, v: Element, m: u64) {
    match map.entry(v) {
        Entry::Vacant(e) => {
            e.insert(m);
        }
        Entry::Occupied(mut e) => {
            if shortlex_cmp(m, *e.get()).is_lt() {
                e.insert(m);
            }
        }
    }
}

/// `FS(elements)` as a plain set, with no witnesses and no length cap;
/// fails once more than `limit` distinct sums appear.
pub fn fs_values(semigroup: &Semigroup, elements: &[Element], limit: usize) -> Result<HashSet<Element>, FsError> {
    let mut all: HashSet<Element> = HashSet::new();
    for a in elements.iter().rev() {
        let fresh = all.iter().map(|s| semigroup.add_unchecked(a, s)).collect::<Result<Vec<_>, _>>()?;
        all.insert(a.clone());
        all.extend(fresh);
        if all.len() > limit {
            return Err(FsError::TooManySums { limit });
        }
    }
    Ok(all)
}

/// First pair `(x, y)` in the given order with `x + y ∉ set`.
pub fn closure_violation(semigroup: &Semigroup, set: &[Element]) -> Result<Option<(Element, Element)>, SemigroupError> {
    let members: HashSet<&Element> = set.iter().collect();
    for x in set {
        for y in set {
            if !members.contains(&semigroup.add(x, y)?) {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

/// Interned value of `a_F` for every mask `F`, filled by
/// `a_F = a_{F∖max F} + a_{max F}`.
pub(crate) struct MaskTable {
    pub ids: Vec<u32>,
    pub values: Vec<Element>,
}

impl MaskTable {
    pub fn build(semigroup: &Semigroup, elements: &[Element]) -> Result<MaskTable, FsError> {
        let n = elements.len();
        let size = 1usize << n;
        let mut ids = vec![0u32; size];
        let mut values: Vec<Element> = Vec::new();
        let mut intern: HashMap<Element, u32> = HashMap::new();
        let mut id_of = |e: Element, values: &mut Vec<Element>| -> u32 {
            *intern.entry(e).or_insert_with_key(|k| {
                values.push(k.clone());
                (values.len() - 1) as u32
            })
        };
        for mask in 1..size {
            let top = mask_max(mask as u64) - 1;
            let rest = mask & !(1 << top);
            let v = if rest == 0 {
                elements[top].clone()
            } else {
                semigroup.add_unchecked(&values[ids[rest] as usize], &elements[top])?
            };
            ids[mask] = id_of(v, &mut values);
        }
        Ok(MaskTable { ids, values })
    }

    pub fn distinct(self) -> Vec<Element> {
        self.values
    }
}

/// Outcome of a pairwise predicate over index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairCheck {
    Holds,
    Violation { first: IndexSet, second: IndexSet },
}

impl PairCheck {
    fn violation(f: u64, g: u64) -> PairCheck {
        PairCheck::Violation { first: IndexSet::from_mask(f), second: IndexSet::from_mask(g) }
    }

    pub fn holds(&self) -> bool {
        matches!(self, PairCheck::Holds)
    }
}

/// A finite-sums set together with one witnessing index set per element.
#[derive(Debug, Clone, Default)]
pub struct FsSet {
    entries: Vec<(Element, IndexSet)>,
    lookup: HashMap<Element, usize>,
}

impl PartialEq for FsSet {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for FsSet {}

impl FsSet {
    fn from_masks(semigroup: &Semigroup, map: HashMap<Element, u64>) -> FsSet {
        FsSet::from_entries(semigroup, map.into_iter().map(|(e, m)| (e, IndexSet::from_mask(m))).collect())
    }

    /// Builds a set from `(element, witness)` pairs, sorted into rank order.
    pub fn from_entries(semigroup: &Semigroup, mut entries: Vec<(Element, IndexSet)>) -> FsSet {
        entries.sort_by_cached_key(|(e, _)| semigroup.rank_key(e));
        entries.dedup_by(|a, b| a.0 == b.0);
        FsSet::in_given_order(entries)
    }

    fn in_given_order(entries: Vec<(Element, IndexSet)>) -> FsSet {
        let lookup = entries.iter().enumerate().map(|(i, (e, _))| (e.clone(), i)).collect();
        FsSet { entries, lookup }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.lookup.contains_key(e)
    }

    pub fn witness(&self, e: &Element) -> Option<&IndexSet> {
        self.lookup.get(e).map(|&i| &self.entries[i].1)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.entries.iter().map(|(e, _)| e)
    }

    pub fn entries(&self) -> &[(Element, IndexSet)] {
        &self.entries
    }

    pub fn is_disjoint(&self, other: &FsSet) -> bool {
        self.elements().all(|e| !other.contains(e))
    }
}

impl Serialize for FsSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let elements: Vec<&Element> = self.entries.iter().map(|(e, _)| e).collect();
        let witnesses: Vec<&IndexSet> = self.entries.iter().map(|(_, w)| w).collect();
        let mut st = serializer.serialize_struct("FsSet", 2)?;
        st.serialize_field("elements", &elements)?;
        st.serialize_field("witnesses", &witnesses)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for FsSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            elements: Vec<Element>,
            witnesses: Vec<IndexSet>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.elements.len() != raw.witnesses.len() {
            return Err(D::Error::custom("elements and witnesses differ in length"));
        }
        let set = FsSet::in_given_order(raw.elements.into_iter().zip(raw.witnesses).collect());
        if set.lookup.len() != set.entries.len() {
            return Err(D::Error::custom("duplicate element in finite-sums set"));
        }
        Ok(set)
    }
}

/// A finite sumsequence `a_{F_1}, …, a_{F_k}` with `F_1 < ⋯ < F_k`.
#[derive(Debug, Clone)]
pub struct SumsequencePrefix<'s> {
    base: SequencePrefix<'s>,
    index_sets: Vec<IndexSet>,
    derived: Vec<Element>,
}

impl<'s> SumsequencePrefix<'s> {
    pub fn new(base: SequencePrefix<'s>, index_sets: Vec<IndexSet>) -> Result<Self, FsError> {
        if index_sets.is_empty() {
            return Err(FsError::EmptyPrefix);
        }
        if let Some(w) = index_sets.windows(2).find(|w| !w[0].precedes(&w[1])) {
            return Err(FsError::NotIncreasing(format!("{} does not precede {}", w[0], w[1])));
        }
        let derived = index_sets.iter().map(|f| base.sum_over(f)).collect::<Result<Vec<_>, _>>()?;
        Ok(SumsequencePrefix { base, index_sets, derived })
    }

    /// Singleton index sets at the given increasing positions.
    pub fn of_positions(base: SequencePrefix<'s>, positions: &[usize]) -> Result<Self, FsError> {
        SumsequencePrefix::new(base, positions.iter().map(|&i| IndexSet::singleton(i)).collect())
    }

    pub fn base(&self) -> &SequencePrefix<'s> {
        &self.base
    }

    pub fn index_sets(&self) -> &[IndexSet] {
        &self.index_sets
    }

    pub fn derived(&self) -> &[Element] {
        &self.derived
    }

    pub fn len(&self) -> usize {
        self.index_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The derived terms `b_1, …, b_k` as a prefix in their own right.
    pub fn derived_prefix(&self) -> SequencePrefix<'s> {
        SequencePrefix { semigroup: self.base.semigroup, elements: self.derived.clone(), cap: self.base.cap }
    }

    pub fn record(&self) -> SumsequenceRecord {
        SumsequenceRecord { index_sets: self.index_sets.clone(), elements: self.derived.clone() }
    }
}

/// Owned, serializable form of a sumsequence: index sets over some base and
/// the derived elements they sum to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsequenceRecord {
    pub index_sets: Vec<IndexSet>,
    pub elements: Vec<Element>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{SemigroupSpec, TruncatedCarrier};

    fn nat(n: u64) -> Element {
        Element::Nat(n)
    }

    fn naturals() -> Semigroup {
        Semigroup::new(SemigroupSpec::Naturals).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn prefix<'s>(s: &'s Semigroup, v: &[u64]) -> SequencePrefix<'s> {
        SequencePrefix::new(s, v.iter().copied().map(nat).collect()).unwrap()
    }

    fn values(fs: &FsSet) -> Vec<Element> {
        fs.elements().cloned().collect()
    }

    #[test]
    fn sums_over_index_sets() {
        let n = naturals();
        assert_eq!(prefix(&n, &[1, 2, 4]).sum_over(&set(&[1, 3])).unwrap(), nat(5));
        assert!(matches!(
            prefix(&n, &[1, 2]).sum_over(&set(&[3])),
            Err(FsError::IndexOutOfRange { index: 3, len: 2 })
        ));
        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        assert_eq!(prefix(&fan, &[2, 3, 4]).sum_over(&set(&[1, 2])).unwrap(), nat(1));
        let c = Semigroup::new(SemigroupSpec::TypeC).unwrap();
        let p = SequencePrefix::new(&c, vec![Element::Pair(1, 1), Element::Pair(1, 2)]).unwrap();
        assert_eq!(p.sum_over(&set(&[1, 2])).unwrap(), Element::Pair(1, 3));
    }

    #[test]
    fn finite_sums_sets() {
        let n = naturals();
        assert_eq!(values(&prefix(&n, &[1, 2, 4]).fs_set().unwrap()), (1..=7).map(nat).collect::<Vec<_>>());
        assert_eq!(values(&prefix(&n, &[1, 2, 4]).fs_ge2().unwrap()), [3, 5, 6, 7].map(nat).to_vec());

        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        assert_eq!(values(&prefix(&fan, &[4, 4, 4]).fs_set().unwrap()), vec![nat(4)]);
        assert_eq!(values(&prefix(&fan, &[2, 3, 4]).fs_ge2().unwrap()), vec![nat(1)]);

        let c = Semigroup::new(SemigroupSpec::TypeC).unwrap();
        let p = SequencePrefix::new(&c, vec![Element::Pair(1, 1), Element::Pair(2, 1), Element::Pair(3, 1)]).unwrap();
        assert_eq!(
            values(&p.fs_set().unwrap()),
            vec![Element::Zero, Element::Pair(1, 1), Element::Pair(2, 1), Element::Pair(3, 1)]
        );
        assert_eq!(values(&p.fs_ge2().unwrap()), vec![Element::Zero]);
    }

    #[test]
    fn witnesses_are_shortlex_least() {
        let n = naturals();
        let fs = prefix(&n, &[1, 2, 3]).fs_set().unwrap();
        assert_eq!(fs.witness(&nat(3)), Some(&set(&[3])));
        let ge2 = prefix(&n, &[1, 2, 3]).fs_ge2().unwrap();
        assert_eq!(ge2.witness(&nat(3)), Some(&set(&[1, 2])));
        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        let fs = prefix(&fan, &[2, 3, 4, 5]).fs_set().unwrap();
        assert_eq!(fs.witness(&nat(1)), Some(&set(&[1, 2])));
    }

    #[test]
    fn length_cap() {
        let n = naturals();
        let p = SequencePrefix::from_stream(&n, 23, 0, 1).unwrap();
        assert!(matches!(p.fs_set(), Err(FsError::PrefixTooLong { len: 23, cap: 22 })));
        assert!(p.clone().with_cap(23).fs_set().is_ok());
    }

    #[test]
    fn properness() {
        let n = naturals();
        assert_eq!(prefix(&n, &[1, 2, 4]).is_proper().unwrap(), PairCheck::Holds);
        assert_eq!(
            prefix(&n, &[1, 2, 3]).is_proper().unwrap(),
            PairCheck::Violation { first: set(&[1, 2]), second: set(&[3]) }
        );
        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        assert_eq!(
            prefix(&fan, &[2, 3, 4, 1]).is_proper().unwrap(),
            PairCheck::Violation { first: set(&[1, 2]), second: set(&[4]) }
        );
    }

    #[test]
    fn bijectivity() {
        let n = naturals();
        assert!(prefix(&n, &[1, 2, 4]).is_bijective());
        assert!(!prefix(&n, &[5, 5]).is_bijective());
        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        assert!(!prefix(&fan, &[2, 3, 2]).is_bijective());
    }

    #[test]
    fn disjoint_properness() {
        let n = naturals();
        assert!(prefix(&n, &[1, 2, 4]).disjoint_proper_check().unwrap().holds());
        let lz = Semigroup::new(SemigroupSpec::LeftZero).unwrap();
        assert!(prefix(&lz, &[1, 2, 3]).disjoint_proper_check().unwrap().holds());
        let fan = Semigroup::new(SemigroupSpec::Fan).unwrap();
        assert_eq!(
            prefix(&fan, &[2, 3, 4, 5]).disjoint_proper_check().unwrap(),
            PairCheck::Violation { first: set(&[1, 2]), second: set(&[3, 4]) }
        );
    }

    #[test]
    fn decomposition() {
        let n = naturals();
        assert!(prefix(&n, &[1, 2, 4]).fs_decomposition_check(1).unwrap());
        let c = Semigroup::new(SemigroupSpec::TypeC).unwrap();
        let p = SequencePrefix::new(&c, vec![Element::Pair(1, 1), Element::Pair(2, 1), Element::Pair(3, 1)]).unwrap();
        assert!(p.fs_decomposition_check(2).unwrap());
        assert!(matches!(p.fs_decomposition_check(3), Err(FsError::InvalidSplit { .. })));
    }

    #[test]
    fn sumsequences() {
        let n = naturals();
        let base = prefix(&n, &[1, 2, 4, 8]);
        let s = SumsequencePrefix::new(base.clone(), vec![set(&[1, 2]), set(&[4])]).unwrap();
        assert_eq!(s.derived(), &[nat(3), nat(8)]);
        assert!(SumsequencePrefix::new(base.clone(), vec![set(&[1, 3]), set(&[2])]).is_err());
        assert!(SumsequencePrefix::new(base, vec![set(&[5])]).is_err());
    }

    #[test]
    fn plain_values_respect_limit() {
        let t = Semigroup::new(SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Naturals }).unwrap();
        let v = fs_values(&t, &[nat(3), nat(4), nat(20)], 100).unwrap();
        let mut v: Vec<_> = v.into_iter().collect();
        v.sort();
        assert_eq!(v, [3, 4, 7, 10, 20].map(nat).to_vec());
        let n = naturals();
        let pow: Vec<Element> = (0..12).map(|i| nat(1 << i)).collect();
        assert!(matches!(fs_values(&n, &pow, 1000), Err(FsError::TooManySums { limit: 1000 })));
    }

    #[test]
    fn fs_set_json() {
        let n = naturals();
        let fs = prefix(&n, &[1, 2]).fs_set().unwrap();
        let j = serde_json::to_value(&fs).unwrap();
        assert_eq!(j, serde_json::json!({"elements": [1, 2, 3], "witnesses": [[1], [2], [1, 2]]}));
        let back: FsSet = serde_json::from_value(j).unwrap();
        assert_eq!(back, fs);
    }
}
