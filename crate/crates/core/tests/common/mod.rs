#![allow(dead_code)]

use std::collections::HashSet;

use fsr_core::semigroup::{Element, Semigroup, SemigroupSpec, TruncatedCarrier};

pub fn families() -> Vec<SemigroupSpec> {
    vec![
        SemigroupSpec::Naturals,
        SemigroupSpec::NatModK { k: 5 },
        SemigroupSpec::Fan,
        SemigroupSpec::TypeC,
        SemigroupSpec::Steinberg,
        SemigroupSpec::LeftZero,
        SemigroupSpec::RightZero,
        SemigroupSpec::NatMin,
        SemigroupSpec::NatMax,
        SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Finite },
        SemigroupSpec::TruncatedNat { cap: 10, carrier: TruncatedCarrier::Naturals },
        SemigroupSpec::DirectSumGroup { p: 2 },
        SemigroupSpec::DirectSumGroup { p: 3 },
        SemigroupSpec::FiniteCayley { order: 3, table: vec![0, 0, 0, 1, 1, 1, 0, 1, 2] },
    ]
}

pub fn sg(spec: SemigroupSpec) -> Semigroup {
    Semigroup::new(spec).unwrap()
}

/// Left-to-right fold over the set bits of `mask`.
pub fn fold(sg: &Semigroup, elems: &[Element], mask: u64) -> Element {
    (0..elems.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| elems[i].clone())
        .reduce(|a, b| sg.add(&a, &b).unwrap())
        .expect("nonempty mask")
}

/// Every subset fold with at least `min` terms.
pub fn naive_fs(sg: &Semigroup, elems: &[Element], min: u32) -> HashSet<Element> {
    (1u64..1 << elems.len()).filter(|m| m.count_ones() >= min).map(|m| fold(sg, elems, m)).collect()
}

/// Elements at the given ranks, read cyclically on finite carriers.
pub fn at_ranks(sg: &Semigroup, ranks: &[usize]) -> Vec<Element> {
    let pool = sg.enumerate(64);
    ranks.iter().map(|&r| pool[r % pool.len()].clone()).collect()
}
