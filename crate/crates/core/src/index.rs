//! Finite index sets and the bitmask helpers behind exhaustive subset scans.
//!
//! Index sets are 1-based. Throughout the crate "least" means least in
//! shortlex order: fewer indices first, then lexicographic on the sorted
//! index lists.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A nonempty, strictly increasing set of positive indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<IndexSet, String> {
        if indices.is_empty() {
            return Err("index set must be nonempty".into());
        }
        if indices[0] == 0 {
            return Err("indices are 1-based".into());
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("indices must be strictly increasing: {indices:?}"));
        }
        Ok(IndexSet(indices))
    }

    pub fn singleton(i: usize) -> IndexSet {
        assert!(i >= 1, "indices are 1-based");
        IndexSet(vec![i])
    }

    /// Consecutive indices `lo..=hi`.
    pub fn range(lo: usize, hi: usize) -> IndexSet {
        IndexSet::new((lo..=hi).collect()).expect("nonempty positive range")
    }

    /// Bit `j` of `mask` stands for index `j + 1`.
    pub fn from_mask(mask: u64) -> IndexSet {
        assert!(mask != 0, "empty mask");
        IndexSet((0..64).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| {
            assert!(i <= 64, "index {i} does not fit a mask");
            m | 1 << (i - 1)
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// `self < other`: every index of `self` precedes every index of `other`.
    pub fn precedes(&self, other: &IndexSet) -> bool {
        self.max() < other.min()
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// The index set with every index shifted by `by`.
    pub fn shifted(&self, by: usize) -> IndexSet {
        IndexSet(self.0.iter().map(|i| i + by).collect())
    }

    /// Composes with an outer index map: `{outer[i-1] : i ∈ self}`.
    pub fn compose(&self, outer: &[usize]) -> IndexSet {
        IndexSet(self.0.iter().map(|&i| outer[i - 1]).collect())
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = String;
    fn try_from(v: Vec<usize>) -> Result<Self, String> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Shortlex comparison of two masks.
pub(crate) fn shortlex_cmp(a: u64, b: u64) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal if a == b => Ordering::Equal,
        // the set owning the lowest differing index is lexicographically smaller
        Ordering::Equal => {
            let low = (a ^ b) & (a ^ b).wrapping_neg();
            if a & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        other => other,
    }
}

/// Number of the highest index in a nonzero mask (1-based).
pub(crate) fn mask_max(mask: u64) -> usize {
    64 - mask.leading_zeros() as usize
}

/// Number of the lowest index in a nonzero mask (1-based).
pub(crate) fn mask_min(mask: u64) -> usize {
    mask.trailing_zeros() as usize + 1
}

/// All nonempty subsets of `{1..n}` as masks, in shortlex order.
pub(crate) fn shortlex_masks(n: usize) -> Vec<u64> {
    assert!(n < 64);
    let mut out = Vec::with_capacity((1usize << n).saturating_sub(1));
    for k in 1..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            out.push(combo.iter().fold(0u64, |m, &j| m | 1 << j));
            // advance to the next k-combination in lexicographic order
            let Some(pos) = (0..k).rev().find(|&p| combo[p] < n - k + p) else { break };
            combo[pos] += 1;
            for q in pos + 1..k {
                combo[q] = combo[q - 1] + 1;
            }
        }
    }
    out
}
