//! Finite colorings of semigroup elements.
//!
//! Colorings are total: every element gets a color, computed from its rank
//! in the family's enumeration (unrankable elements count as rank
//! `u64::MAX`) or looked up in an explicit table with a default.

use std::collections::HashMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::semigroup::{Element, Semigroup};

/// The SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix64(rank ⊕ rotl(seed, 32)) mod r`.
pub fn seeded_color(rank: u64, seed: u64, colors: u32) -> u32 {
    (mix64(rank ^ seed.rotate_left(32)) % colors as u64) as u32
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coloring {
    /// `rank mod r`.
    RankMod { colors: u32 },
    SeededRandom { colors: u32, seed: u64 },
    Table(ColorTable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorTable {
    entries: Vec<(Element, u32)>,
    lookup: HashMap<Element, u32>,
    default: u32,
    colors: u32,
}

impl ColorTable {
    /// Later entries for the same element override earlier ones.
    pub fn new(entries: Vec<(Element, u32)>, default: u32, colors: u32) -> Result<ColorTable, String> {
        if colors == 0 {
            return Err("a coloring needs at least one color".into());
        }
        if default >= colors {
            return Err(format!("default color {default} is not below {colors}"));
        }
        if let Some((e, c)) = entries.iter().find(|(_, c)| *c >= colors) {
            return Err(format!("color {c} of {e} is not below {colors}"));
        }
        let lookup = entries.iter().cloned().collect();
        Ok(ColorTable { entries, lookup, default, colors })
    }

    pub fn entries(&self) -> &[(Element, u32)] {
        &self.entries
    }

    pub fn default_color(&self) -> u32 {
        self.default
    }
}

impl Coloring {
    pub fn constant() -> Coloring {
        Coloring::RankMod { colors: 1 }
    }

    /// Center `1` gets color 0, every leaf color 1.
    pub fn fan_center_leaves() -> Coloring {
        Coloring::Table(ColorTable::new(vec![(Element::Nat(1), 0)], 1, 2).expect("valid table"))
    }

    /// Colors the given elements in order; everything else gets `default`.
    pub fn from_assignment(elements: &[Element], colors_of: &[u32], default: u32, colors: u32) -> Result<Coloring, String> {
        let entries = elements.iter().cloned().zip(colors_of.iter().copied()).collect();
        Ok(Coloring::Table(ColorTable::new(entries, default, colors)?))
    }

    pub fn colors(&self) -> u32 {
        match self {
            Coloring::RankMod { colors } | Coloring::SeededRandom { colors, .. } => *colors,
            Coloring::Table(t) => t.colors,
        }
    }

    pub fn color(&self, semigroup: &Semigroup, e: &Element) -> u32 {
        match self {
            Coloring::RankMod { colors } => (semigroup.rank(e).unwrap_or(u64::MAX) % *colors as u64) as u32,
            Coloring::SeededRandom { colors, seed } => {
                seeded_color(semigroup.rank(e).unwrap_or(u64::MAX), *seed, *colors)
            }
            Coloring::Table(t) => t.lookup.get(e).copied().unwrap_or(t.default),
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            Coloring::RankMod { colors: 0 } | Coloring::SeededRandom { colors: 0, .. } => {
                Err("a coloring needs at least one color".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ColoringRepr {
    RankMod { colors: u32 },
    SeededRandom { colors: u32, seed: u64 },
    Table { colors: u32, default: u32, entries: Vec<(Element, u32)> },
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Coloring::RankMod { colors } => ColoringRepr::RankMod { colors: *colors },
            Coloring::SeededRandom { colors, seed } => ColoringRepr::SeededRandom { colors: *colors, seed: *seed },
            Coloring::Table(t) => {
                ColoringRepr::Table { colors: t.colors, default: t.default, entries: t.entries.clone() }
            }
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let c = match ColoringRepr::deserialize(deserializer)? {
            ColoringRepr::RankMod { colors } => Coloring::RankMod { colors },
            ColoringRepr::SeededRandom { colors, seed } => Coloring::SeededRandom { colors, seed },
            ColoringRepr::Table { colors, default, entries } => {
                Coloring::Table(ColorTable::new(entries, default, colors).map_err(D::Error::custom)?)
            }
        };
        c.check().map_err(D::Error::custom)?;
        Ok(c)
    }
}
