mod common;

use std::collections::{BTreeSet, HashSet};

use common::{naive_fs, sg};
use fsr_core::constructions::{
    group_proper_subsequence, right_ideal_scan, split_into_disjoint_ip, sumsequence_dichotomy, Construction, ConstructionError,
};
use fsr_core::fs::SumsequenceRecord;
use fsr_core::semigroup::{enumerate_finite_semigroups, TruncatedCarrier};
use fsr_core::{Element, Semigroup, SemigroupSpec, SequencePrefix};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn derived(s: &Semigroup, stream: &[Element], record: &SumsequenceRecord) -> Vec<Element> {
    let sum = |f: &fsr_core::IndexSet| {
        f.indices().iter().map(|&i| stream[i - 1].clone()).reduce(|a, b| s.add(&a, &b).unwrap()).unwrap()
    };
    record.index_sets.iter().map(sum).collect()
}

#[test]
fn group_proper_output_is_proper() {
    let mut rng = StdRng::seed_from_u64(12);
    let mut built = [0usize; 13];
    for spec in [SemigroupSpec::DirectSumGroup { p: 2 }, SemigroupSpec::DirectSumGroup { p: 3 }, SemigroupSpec::NatModK { k: 7 }] {
        let s = sg(spec);
        let pool = s.enumerate(1 << 13);
        for (k, count) in built.iter_mut().enumerate().skip(2) {
            for _ in 0..6 {
                // group_proper needs a bijective stream
                let mut stream = pool.clone();
                stream.shuffle(&mut rng);
                stream.truncate(256);
                let p = SequencePrefix::new(&s, stream.clone()).unwrap();
                match group_proper_subsequence(&p, k) {
                    Ok(r) => {
                        let Construction::ProperPrefix { sumsequence } = &r.construction else { panic!("unexpected {r:?}") };
                        assert_eq!(sumsequence.elements, derived(&s, &stream, sumsequence));
                        let out = SequencePrefix::new(&s, sumsequence.elements.clone()).unwrap();
                        assert_eq!(out.len(), k);
                        assert!(out.is_proper().unwrap().holds(), "k = {k}: {:?}", sumsequence.elements);
                        *count += 1;
                    }
                    Err(ConstructionError::StreamExhausted { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(built[2..].iter().all(|&b| b > 0), "some k never succeeded: {built:?}");
}

#[test]
fn split_classes_are_disjoint_and_bijective() {
    let nat = sg(SemigroupSpec::Naturals);
    let dsg = sg(SemigroupSpec::DirectSumGroup { p: 3 });
    let prefixes = [
        (&nat, (0..9).map(|i| Element::Nat(1 << i)).collect::<Vec<_>>()),
        (&dsg, (0..9).map(|i| Element::Vector(vec![(i + 1, 1 + i % 2)])).collect()),
    ];
    for (s, elems) in prefixes {
        let p = SequencePrefix::new(s, elems.clone()).unwrap();
        for m in 2..=4 {
            let r = split_into_disjoint_ip(&p, m).unwrap();
            let Construction::DisjointFamily { classes, sets } = &r.construction else { panic!("{r:?}") };
            assert_eq!(classes.len(), m);
            for (class, set) in classes.iter().zip(sets) {
                let sub: Vec<Element> = class.iter().map(|&i| elems[i - 1].clone()).collect();
                assert!(SequencePrefix::new(s, sub.clone()).unwrap().is_bijective());
                let got: HashSet<Element> = set.elements().cloned().collect();
                assert_eq!(got, naive_fs(s, &sub, 1));
            }
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    assert!(sets[i].is_disjoint(&sets[j]), "classes {i} and {j}");
                }
            }
        }
    }
}

/// All nonempty right ideals by brute force over subsets.
fn brute_right_ideals(s: &Semigroup, carrier: &[Element]) -> Vec<BTreeSet<Element>> {
    let n = carrier.len();
    (1u64..1 << n)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| carrier[i].clone()).collect::<BTreeSet<_>>())
        .filter(|r| r.iter().all(|x| carrier.iter().all(|y| r.contains(&s.add(x, y).unwrap()))))
        .collect()
}

fn check_ideals(s: &Semigroup, carrier: &[Element]) {
    let r = right_ideal_scan(s, carrier).unwrap();
    let Construction::IdealList { ideals, .. } = &r.construction else { panic!("{r:?}") };
    let got: Vec<BTreeSet<Element>> = ideals.iter().map(|i| i.elements.iter().cloned().collect()).collect();
    let mut expected = brute_right_ideals(s, carrier);
    let (mut a, mut b) = (got.clone(), expected.clone());
    a.sort();
    b.sort();
    assert_eq!(a, b, "{:?}", s.spec());
    let full: BTreeSet<Element> = carrier.iter().cloned().collect();
    expected.retain(|r| r != &full);
    for (ideal, set) in ideals.iter().zip(&got) {
        let maximal = set != &full && !expected.iter().any(|o| o != set && o.is_superset(set));
        assert_eq!(ideal.maximal_proper, maximal, "{set:?}");
    }
}

#[test]
fn right_ideals_match_brute_force() {
    for order in 1..=3 {
        for table in enumerate_finite_semigroups(order).unwrap() {
            let s = sg(SemigroupSpec::FiniteCayley { order, table });
            check_ideals(&s, &s.enumerate(order));
        }
    }
    for spec in [
        SemigroupSpec::NatModK { k: 8 },
        SemigroupSpec::TruncatedNat { cap: 8, carrier: TruncatedCarrier::Finite },
    ] {
        let s = sg(spec);
        check_ideals(&s, &s.enumerate(8));
    }
    // a finite subsemigroup of an infinite carrier
    let min = sg(SemigroupSpec::NatMin);
    check_ideals(&min, &(1..=8).map(Element::Nat).collect::<Vec<_>>());
}

fn type1_law(s: &Semigroup, b: &[Element]) -> bool {
    (0..b.len()).all(|n| (n + 1..b.len()).all(|m| s.add(&b[n], &b[m]).unwrap() == b[n]))
}

fn type2_law(s: &Semigroup, b: &[Element]) -> bool {
    (1..b.len()).all(|n| {
        let fs = naive_fs(s, &b[..n], 1);
        fs.iter().all(|x| !fs.contains(&s.add(x, &b[n]).unwrap()))
    })
}

/// A returned certificate satisfies exactly the law it names.
#[test]
fn dichotomy_certificates_are_sound() {
    let mut certificates = 0;
    for order in 1..=3usize {
        for table in enumerate_finite_semigroups(order).unwrap() {
            let s = sg(SemigroupSpec::FiniteCayley { order, table });
            for period in 1..=3usize {
                for code in 0..order.pow(period as u32) {
                    let digits: Vec<u64> = (0..period).map(|d| (code / order.pow(d as u32) % order) as u64).collect();
                    let stream: Vec<Element> = (0..24).map(|i| Element::Nat(digits[i % period])).collect();
                    let p = SequencePrefix::new(&s, stream.clone()).unwrap();
                    let r = sumsequence_dichotomy(&p, 3, 20_000).unwrap();
                    let (record, claims_type1) = match &r.construction {
                        Construction::Type1 { sumsequence } => (sumsequence, true),
                        Construction::Type2 { sumsequence } => (sumsequence, false),
                        Construction::Inconclusive { .. } => continue,
                        other => panic!("{other:?}"),
                    };
                    let b = derived(&s, &stream, record);
                    assert_eq!(b, record.elements);
                    let (t1, t2) = (type1_law(&s, &b), type2_law(&s, &b));
                    assert!(t1 != t2, "both or neither law holds for {b:?}");
                    assert_eq!(t1, claims_type1);
                    certificates += 1;
                }
            }
        }
    }
    assert!(certificates > 0);
}
