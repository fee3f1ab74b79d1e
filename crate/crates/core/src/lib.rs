//! Finite-horizon experiments with finite sums in arbitrary semigroups.
//!
//! The [`semigroup`] module holds the families and their canonical
//! elements. [`fs`] and [`tails`] compute finite sums, properness and tail
//! intersections. [`constructions`], [`detectors`] and [`hindman`] build
//! and search for certificates, and [`witness`] replays them.

pub mod coloring;
pub mod constructions;
pub mod detectors;
pub mod fs;
pub mod hindman;
pub mod index;
pub mod search;
pub mod semigroup;
pub mod tails;
pub mod witness;

pub use coloring::Coloring;
pub use fs::{FsError, FsSet, PairCheck, SequencePrefix, SumsequencePrefix};
pub use index::IndexSet;
pub use semigroup::{Element, Semigroup, SemigroupError, SemigroupSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/finite_sums.md")]
    mod finite_sums {}
    #[doc = include_str!("../../../book/src/tails.md")]
    mod tails {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/hindman.md")]
    mod hindman {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
}
