//! Finite-horizon approximation of the tail intersection
//! `A∞ = ⋂ₙ FS(a_n, a_{n+1}, …)`.
//!
//! For a horizon `H` the window is `W_H = FS(a_⌈H/2⌉, …, a_H)`, which is
//! already the intersection of `FS(a_n, …, a_H)` over `n ≤ ⌈H/2⌉` because
//! these sets are nested. Elements of `W_H` near the end of the window are
//! artifacts of truncation and move with `H`, so the snapshot at `H` also
//! intersects the windows of the previous `s - 1` horizons. The status is
//! `stable` only when the last `s` snapshots agree.

use serde::{Deserialize, Serialize};

use crate::fs::{fs_values, FsError, SequencePrefix};
use crate::semigroup::Element;

pub const DEFAULT_STABILITY_WINDOW: usize = 3;
/// Bound on distinct sums per window.
pub const DEFAULT_MAX_DISTINCT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailOptions {
    pub stability_window: usize,
    pub max_distinct: usize,
}

impl Default for TailOptions {
    fn default() -> Self {
        TailOptions { stability_window: DEFAULT_STABILITY_WINDOW, max_distinct: DEFAULT_MAX_DISTINCT }
    }
}

/// Horizons `4, 8, 16, …` not exceeding `len`.
pub fn default_schedule(len: usize) -> Vec<usize> {
    std::iter::successors(Some(4usize), |h| h.checked_mul(2)).take_while(|&h| h <= len).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub horizon: usize,
    /// First index of the window `W_H`.
    pub window_start: usize,
    /// The snapshot `Â_H`, in rank order.
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TailStatus {
    Stable { value: Vec<Element> },
    Unstable,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub horizon_schedule: Vec<usize>,
    pub stability_window: usize,
    pub snapshots: Vec<Snapshot>,
    pub status: TailStatus,
}

impl HorizonReport {
    pub fn stable_value(&self) -> Option<&[Element]> {
        match &self.status {
            TailStatus::Stable { value } => Some(value),
            _ => None,
        }
    }

    /// Stable and nonempty.
    pub fn is_stable_nonempty(&self) -> bool {
        self.stable_value().is_some_and(|v| !v.is_empty())
    }

    /// Status implied by a list of snapshots.
    pub fn status_of(snapshots: &[Snapshot], s: usize) -> TailStatus {
        let Some(last) = snapshots.last() else { return TailStatus::Unstable };
        if last.elements.is_empty() {
            return TailStatus::Empty;
        }
        let s = s.max(1);
        if snapshots.len() >= s && snapshots[snapshots.len() - s..].iter().all(|x| x.elements == last.elements) {
            TailStatus::Stable { value: last.elements.clone() }
        } else {
            TailStatus::Unstable
        }
    }
}

/// Computes the snapshots `Â_H` for every horizon in `schedule`.
pub fn tail_intersection(
    prefix: &SequencePrefix<'_>,
    schedule: &[usize],
    options: TailOptions,
) -> Result<HorizonReport, FsError> {
    if schedule.is_empty() {
        return Err(FsError::InvalidSchedule("schedule is empty".into()));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FsError::InvalidSchedule(format!("horizons must be positive and increasing: {schedule:?}")));
    }
    let last = *schedule.last().expect("nonempty");
    if last > prefix.len() {
        return Err(FsError::InvalidSchedule(format!(
            "horizon {last} exceeds the available prefix length {}",
            prefix.len()
        )));
    }
    let sg = prefix.semigroup();
    let s = options.stability_window.max(1);
    let mut windows = Vec::with_capacity(schedule.len());
    let mut snapshots = Vec::with_capacity(schedule.len());
    for &h in schedule {
        let start = h.div_ceil(2);
        windows.push(fs_values(sg, &prefix.elements()[start - 1..h], options.max_distinct)?);
        let recent = &windows[windows.len().saturating_sub(s)..];
        let mut elements: Vec<Element> =
            recent[0].iter().filter(|e| recent[1..].iter().all(|w| w.contains(*e))).cloned().collect();
        elements.sort_by_cached_key(|e| sg.rank_key(e));
        snapshots.push(Snapshot { horizon: h, window_start: start, elements });
    }
    let status = HorizonReport::status_of(&snapshots, s);
    Ok(HorizonReport { horizon_schedule: schedule.to_vec(), stability_window: s, snapshots, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{Semigroup, SemigroupSpec};

    fn report(spec: SemigroupSpec, len: usize, stride: u64) -> HorizonReport {
        let sg = Semigroup::new(spec).unwrap();
        let p = SequencePrefix::from_stream(&sg, len, 0, stride).unwrap();
        tail_intersection(&p, &default_schedule(len), TailOptions::default()).unwrap()
    }

    #[test]
    fn residues_fill_the_group() {
        let r = report(SemigroupSpec::NatModK { k: 5 }, 64, 1);
        assert_eq!(r.status, TailStatus::Stable { value: (0..5).map(Element::Nat).collect() });
    }

    #[test]
    fn multiples_of_the_modulus() {
        let r = report(SemigroupSpec::NatModK { k: 5 }, 64, 5);
        assert_eq!(r.status, TailStatus::Stable { value: vec![Element::Nat(0)] });
    }

    #[test]
    fn naturals_are_unstable() {
        let r = report(SemigroupSpec::Naturals, 64, 1);
        assert_eq!(r.status, TailStatus::Unstable);
    }

    #[test]
    fn fan_stabilizes_at_the_center() {
        let r = report(SemigroupSpec::Fan, 64, 1);
        assert_eq!(r.status, TailStatus::Stable { value: vec![Element::Nat(1)] });
    }

    #[test]
    fn bad_schedules() {
        let sg = Semigroup::new(SemigroupSpec::Naturals).unwrap();
        let p = SequencePrefix::from_stream(&sg, 10, 0, 1).unwrap();
        for sched in [vec![], vec![4, 4], vec![0, 4], vec![4, 11]] {
            assert!(matches!(
                tail_intersection(&p, &sched, TailOptions::default()),
                Err(FsError::InvalidSchedule(_))
            ));
        }
    }

    #[test]
    fn schedule_doubles() {
        assert_eq!(default_schedule(64), vec![4, 8, 16, 32, 64]);
        assert_eq!(default_schedule(3), Vec::<usize>::new());
    }
}
