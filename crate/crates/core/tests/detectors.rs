mod common;

use std::collections::HashSet;

use common::{families, naive_fs, sg};
use fsr_core::detectors::{classify, detect_type_a, detect_type_b, detect_type_c, fs2_certificate, ClassifyOptions};
use fsr_core::semigroup::enumerate_finite_semigroups;
use fsr_core::{Element, Semigroup, SemigroupSpec, SequencePrefix};

fn commutative_idempotent(order: usize, table: &[usize]) -> bool {
    (0..order).all(|x| table[x * order + x] == x && (0..order).all(|y| table[x * order + y] == table[y * order + x]))
}

/// Whether some center `e` and `n` other idempotents satisfy the type B laws.
fn brute_type_b(order: usize, table: &[usize], n: usize) -> bool {
    let add = |x: usize, y: usize| table[x * order + y];
    (0..order).any(|e| {
        if add(e, e) != e {
            return false;
        }
        let others: Vec<usize> = (0..order).filter(|&l| l != e).collect();
        (0u32..1 << others.len()).filter(|m| m.count_ones() as usize == n).any(|m| {
            let leaves: Vec<usize> = (0..others.len()).filter(|i| m >> i & 1 == 1).map(|i| others[i]).collect();
            leaves.iter().all(|&l| add(l, l) == l && add(e, l) == e && add(l, e) == e)
                && leaves.iter().all(|&a| leaves.iter().all(|&b| a == b || add(a, b) == e))
        })
    })
}

#[test]
fn type_b_agrees_with_brute_force_on_semilattices() {
    let mut semilattices = 0;
    let mut positives = 0;
    for order in 1..=4usize {
        for table in enumerate_finite_semigroups(order).unwrap() {
            if !commutative_idempotent(order, &table) {
                continue;
            }
            semilattices += 1;
            let s = sg(SemigroupSpec::FiniteCayley { order, table: table.clone() });
            for n in 2..=3 {
                let found = detect_type_b(&s, n, order, 1_000_000).unwrap();
                assert_eq!(found.is_some(), brute_type_b(order, &table, n), "table {table:?}, n = {n}");
                if let Some(w) = found {
                    w.verify(&s).unwrap();
                    positives += 1;
                }
            }
        }
    }
    assert!(semilattices > 0 && positives > 0);
}

#[test]
fn detectors_are_monotone_in_horizon() {
    let horizons = [12, 25, 50, 100, 200];
    for spec in families() {
        let s = sg(spec.clone());
        let found = |h: usize| -> [bool; 3] {
            [
                detect_type_a(&s, 16, 8, h).unwrap().is_some(),
                detect_type_b(&s, 3, h, 1_000_000).unwrap().is_some(),
                detect_type_c(&s, 3, 5, h, 1_000_000).unwrap().is_some(),
            ]
        };
        let runs: Vec<[bool; 3]> = horizons.iter().map(|&h| found(h)).collect();
        for w in runs.windows(2) {
            for (p, (before, after)) in w[0].iter().zip(&w[1]).enumerate() {
                assert!(!before || *after, "{spec:?}: pattern {p} lost as the horizon grows ({runs:?})");
            }
        }
    }
}

#[test]
fn classify_is_monotone_in_horizon() {
    for spec in families() {
        let s = sg(spec.clone());
        let mut seen = None;
        for h in [25, 50, 100, 200] {
            let report = classify(&s, h, ClassifyOptions::default()).unwrap();
            report.verify(&s).unwrap();
            if let Some(p) = seen {
                assert!(report.obstruction().is_some(), "{spec:?}: {p:?} at a smaller horizon, nothing at {h}");
            }
            seen = seen.or(report.obstruction());
        }
    }
}

fn check_certificate(s: &Semigroup, stream: &[Element]) -> bool {
    let p = SequencePrefix::new(s, stream.to_vec()).unwrap();
    let Some(cert) = fs2_certificate(&p, 3, 10).unwrap() else { return false };
    cert.verify(s).unwrap();
    let q = SequencePrefix::new(s, cert.prefix.clone()).unwrap();
    assert!(q.is_bijective());
    for (pos, e) in cert.positions.iter().zip(&cert.prefix) {
        assert_eq!(&stream[pos - 1], e);
    }
    let recorded: HashSet<Element> = cert.fs2.elements().cloned().collect();
    assert_eq!(recorded, naive_fs(s, &cert.prefix, 2));
    assert_eq!(naive_fs(s, &cert.prefix[..cert.stable_upto], 2).len(), recorded.len());
    true
}

#[test]
fn fs2_certificates_match_the_oracle() {
    let mut certified = 0;
    for spec in families() {
        let s = sg(spec);
        for stride in 1..=3 {
            if check_certificate(&s, &s.stream(60, 0, stride)) {
                certified += 1;
            }
        }
    }
    assert!(certified > 0);
}
