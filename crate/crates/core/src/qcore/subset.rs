use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of the parties `{1, 2, 3}`.
///
/// Bit `p - 1` of the mask marks party `p`. Party `p` lives on index bit
/// `1 << (3 - p)` of the 8-dimensional basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u8>", try_from = "Vec<u8>")]
pub struct SubsetMask(u8);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);
    pub const FULL: SubsetMask = SubsetMask(0b111);

    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits <= 0b111).then_some(SubsetMask(bits))
    }

    pub fn from_parties(parties: &[u8]) -> Option<Self> {
        let mut bits = 0u8;
        for &p in parties {
            if !(1..=3).contains(&p) {
                return None;
            }
            bits |= 1 << (p - 1);
        }
        Some(SubsetMask(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, party: u8) -> bool {
        (1..=3).contains(&party) && self.0 & (1 << (party - 1)) != 0
    }

    pub fn complement(self) -> Self {
        SubsetMask(!self.0 & 0b111)
    }

    /// Bits of the 8-dimensional basis index owned by the parties in the subset.
    pub fn index_bits(self) -> usize {
        (1..=3u8)
            .filter(|&p| self.contains(p))
            .map(|p| 1usize << (3 - p))
            .fold(0, |acc, b| acc | b)
    }

    pub fn parties(self) -> Vec<u8> {
        (1..=3).filter(|&p| self.contains(p)).collect()
    }

    /// The eight subsets, ordered by mask value.
    pub fn all() -> impl Iterator<Item = SubsetMask> {
        (0..8u8).map(SubsetMask)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parties().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl From<SubsetMask> for Vec<u8> {
    fn from(m: SubsetMask) -> Self {
        m.parties()
    }
}

impl TryFrom<Vec<u8>> for SubsetMask {
    type Error = String;

    fn try_from(parties: Vec<u8>) -> Result<Self, Self::Error> {
        SubsetMask::from_parties(&parties).ok_or_else(|| format!("invalid party list {parties:?}"))
    }
}
