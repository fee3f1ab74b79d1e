//! Serializable results of every operation, each with a replay that
//! re-derives its claims on a fresh semigroup handle.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::constructions::{verify_construction, ConstructionResult};
use crate::detectors::{classify, ClaimFailure, ClassifyReport, ForbiddenWitness, Pattern};
use crate::fs::{FsSet, PairCheck, SequencePrefix};
use crate::hindman::{exhaustive_threshold, verify_avoider, DisjointFamiliesReport, MonoFsWitness, ThresholdOutcome, ThresholdReport};
use crate::search::SearchEnd;
use crate::semigroup::{enumerate_finite_semigroups, Element, Semigroup};
use crate::tails::{tail_intersection, HorizonReport, TailOptions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessBody {
    FiniteSums {
        prefix: Vec<Element>,
        at_least_two: bool,
        set: FsSet,
    },
    Properness {
        prefix: Vec<Element>,
        disjoint: bool,
        result: PairCheck,
    },
    Tails {
        prefix: Vec<Element>,
        report: HorizonReport,
    },
    Construction {
        operation: String,
        stream: Vec<Element>,
        result: ConstructionResult,
    },
    Forbidden {
        pattern: Pattern,
        horizon: usize,
        witness: Option<ForbiddenWitness>,
    },
    Classification {
        report: ClassifyReport,
    },
    MonoFs {
        base: Vec<Element>,
        coloring: Coloring,
        /// Sums must stay inside `base` (universe searches).
        closed: bool,
        k: usize,
        witness: Option<MonoFsWitness>,
        end: SearchEnd,
        nodes: u64,
    },
    Threshold {
        budget: u64,
        report: ThresholdReport,
    },
    DisjointFamilies {
        universe: Vec<Element>,
        coloring: Coloring,
        report: DisjointFamiliesReport,
    },
    EnumerationCounts {
        /// `counts[i]` labeled semigroups of order `i + 1`.
        counts: Vec<usize>,
    },
}

fn fail(claim: &str, detail: impl std::fmt::Display) -> ClaimFailure {
    ClaimFailure::new(claim, detail.to_string())
}

impl WitnessBody {
    /// Whether the body records a positive result (exit status 0).
    pub fn is_positive(&self) -> bool {
        match self {
            WitnessBody::FiniteSums { .. } | WitnessBody::EnumerationCounts { .. } => true,
            WitnessBody::Tails { report, .. } => report.is_stable_nonempty(),
            WitnessBody::Properness { result, .. } => result.holds(),
            WitnessBody::Construction { result, .. } => result.is_positive(),
            WitnessBody::Forbidden { witness, .. } => witness.is_some(),
            WitnessBody::Classification { report } => report.obstruction().is_some(),
            WitnessBody::MonoFs { witness, .. } => witness.is_some(),
            WitnessBody::Threshold { report, .. } => matches!(report.outcome, ThresholdOutcome::Threshold { .. }),
            WitnessBody::DisjointFamilies { report, .. } => report.complete,
        }
    }

    /// Replays every claim of the body against `sg`.
    pub fn replay(&self, sg: &Semigroup) -> Result<(), ClaimFailure> {
        let prefix_of = |p: &[Element]| SequencePrefix::new(sg, p.to_vec()).map_err(|e| fail("prefix", e));
        match self {
            WitnessBody::FiniteSums { prefix, at_least_two, set } => {
                let p = prefix_of(prefix)?;
                let actual = if *at_least_two { p.fs_ge2() } else { p.fs_set() }.map_err(|e| fail("finite sums", e))?;
                let a: HashSet<&Element> = actual.elements().collect();
                let b: HashSet<&Element> = set.elements().collect();
                if a != b {
                    return Err(fail("finite sums", "recorded set differs from the recomputed one"));
                }
                for (e, w) in set.entries() {
                    let v = p.sum_over(w).map_err(|err| fail("finite sums", err))?;
                    if &v != e {
                        return Err(fail(&format!("sum over {w}"), format!("is {v}, not {e}")));
                    }
                }
                if *at_least_two && set.entries().iter().any(|(_, w)| w.len() < 2) {
                    return Err(fail("finite sums", "a witness has fewer than two indices"));
                }
                Ok(())
            }
            WitnessBody::Properness { prefix, disjoint, result } => {
                let p = prefix_of(prefix)?;
                if let PairCheck::Violation { first, second } = result {
                    let claim = format!("sum over {first} = sum over {second}");
                    let (x, y) = (p.sum_over(first).map_err(|e| fail(&claim, e))?, p.sum_over(second).map_err(|e| fail(&claim, e))?);
                    if x != y {
                        return Err(fail(&claim, format!("{x} differs from {y}")));
                    }
                    let ordered = if *disjoint { first.is_disjoint(second) } else { first.precedes(second) };
                    if !ordered {
                        return Err(fail(&claim, "the index sets are not in the required position"));
                    }
                }
                let again = if *disjoint { p.disjoint_proper_check() } else { p.is_proper() }.map_err(|e| fail("properness", e))?;
                if &again != result {
                    return Err(fail("properness", "recomputed check disagrees"));
                }
                Ok(())
            }
            WitnessBody::Tails { prefix, report } => {
                let p = prefix_of(prefix)?;
                let opts = TailOptions { stability_window: report.stability_window, ..TailOptions::default() };
                let again = tail_intersection(&p, &report.horizon_schedule, opts).map_err(|e| fail("tail intersection", e))?;
                if let Some(s) = again.snapshots.iter().zip(&report.snapshots).find(|(a, b)| a != b) {
                    return Err(fail(&format!("snapshot at horizon {}", s.1.horizon), "does not replay"));
                }
                if &again != report {
                    return Err(fail("tail intersection", "recomputed report disagrees"));
                }
                Ok(())
            }
            WitnessBody::Construction { operation, stream, result } => {
                if !result.verified {
                    return Err(fail(operation, "result is not marked verified"));
                }
                verify_construction(&result.construction, sg, stream).map_err(|d| fail(operation, d))
            }
            WitnessBody::Forbidden { pattern, witness, .. } => match witness {
                Some(w) if w.pattern != *pattern => Err(fail("pattern", format!("witness is {}", w.pattern.name()))),
                Some(w) => w.verify(sg),
                None => Ok(()),
            },
            WitnessBody::Classification { report } => {
                report.verify(sg)?;
                let again = classify(sg, report.horizon, report.options).map_err(|e| fail("classification", e))?;
                if &again != report {
                    return Err(fail("classification", "rerunning the detectors gives a different report"));
                }
                Ok(())
            }
            WitnessBody::MonoFs { base, coloring, closed, witness, .. } => match witness {
                Some(w) => w.verify(sg, base, coloring, *closed).map_err(|d| fail("monochromatic finite sums", d)),
                None => Ok(()),
            },
            WitnessBody::Threshold { budget, report } => {
                if report.universe != sg.enumerate(report.max_n) {
                    return Err(fail("threshold universe", "is not the enumeration prefix"));
                }
                let (avoider, len) = match &report.outcome {
                    ThresholdOutcome::Threshold { threshold, avoider } => (avoider, threshold - 1),
                    ThresholdOutcome::NotReached { avoider } => (avoider, report.universe.len()),
                    ThresholdOutcome::BudgetExhausted { .. } => (&Vec::new(), 0),
                };
                if avoider.len() != len {
                    return Err(fail("avoider", format!("colors {} elements, expected {len}", avoider.len())));
                }
                verify_avoider(sg, &report.universe, avoider, report.colors, report.k).map_err(|d| fail("avoider", d))?;
                let again = exhaustive_threshold(sg, report.k, report.colors, report.max_n, *budget, 1)
                    .map_err(|e| fail("threshold", e))?;
                if &again != report {
                    return Err(fail("threshold", "rerunning the exhaustive search gives a different report"));
                }
                Ok(())
            }
            WitnessBody::DisjointFamilies { universe, coloring, report } => {
                report.verify(sg, universe, coloring).map_err(|d| fail("disjoint families", d))
            }
            WitnessBody::EnumerationCounts { counts } => {
                let again = (1..=counts.len())
                    .map(|n| enumerate_finite_semigroups(n).map(Iterator::count))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| fail("enumeration", e))?;
                if &again != counts {
                    return Err(fail("enumeration", format!("recomputed counts are {again:?}")));
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::detect_type_c;
    use crate::semigroup::SemigroupSpec;

    #[test]
    fn round_trip_and_tamper() {
        let tc = Semigroup::new(SemigroupSpec::TypeC).unwrap();
        let w = detect_type_c(&tc, 3, 5, 100, 10_000).unwrap().unwrap();
        let body = WitnessBody::Forbidden { pattern: Pattern::TypeC, horizon: 100, witness: Some(w) };
        let json = serde_json::to_string(&body).unwrap();
        let back: WitnessBody = serde_json::from_str(&json).unwrap();
        assert_eq!(back, body);
        back.replay(&tc).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["witness"]["identities"][5]["value"] = serde_json::json!([1, 1]);
        let bad: WitnessBody = serde_json::from_value(v).unwrap();
        assert!(bad.replay(&tc).is_err());
    }

    #[test]
    fn properness_violation_replays() {
        let n = Semigroup::new(SemigroupSpec::Naturals).unwrap();
        let p = SequencePrefix::new(&n, [1, 2, 3].map(Element::Nat).to_vec()).unwrap();
        let body = WitnessBody::Properness { prefix: p.elements().to_vec(), disjoint: false, result: p.is_proper().unwrap() };
        assert!(!body.is_positive());
        body.replay(&n).unwrap();
    }

    #[test]
    fn counts_replay() {
        let body = WitnessBody::EnumerationCounts { counts: vec![1, 8, 113] };
        body.replay(&Semigroup::new(SemigroupSpec::Naturals).unwrap()).unwrap();
        let bad = WitnessBody::EnumerationCounts { counts: vec![1, 8, 112] };
        assert!(bad.replay(&Semigroup::new(SemigroupSpec::Naturals).unwrap()).is_err());
    }
}
