//! Chains over one face class of a lattice, and their JSON file form.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::lattice::{CodeFamily, Family, Lattice, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    C0,
    C1,
    C2,
}

impl Grade {
    pub fn name(self) -> &'static str {
        match self {
            Grade::C0 => "c0",
            Grade::C1 => "c1",
            Grade::C2 => "c2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub grade: Grade,
    pub bits: Bits,
}

impl Chain {
    pub fn new(grade: Grade, bits: Bits) -> Self {
        Chain { grade, bits }
    }

    pub fn zeros(grade: Grade, len: usize) -> Self {
        Chain::new(grade, Bits::zeros(len))
    }

    pub fn from_indices(grade: Grade, len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        Chain::new(grade, Bits::from_indices(len, ones))
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn xor(&self, other: &Chain) -> Result<Chain> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade.name(),
                got: other.grade.name(),
            });
        }
        if self.bits.len() != other.bits.len() {
            return Err(Error::LengthMismatch {
                expected: self.bits.len(),
                got: other.bits.len(),
            });
        }
        Ok(Chain::new(self.grade, self.bits.xor(&other.bits)))
    }
}

/// `{"family", "L", "side", "grade", "bits"}` with `bits` as little-endian
/// hex over the canonical indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFile {
    pub family: Family,
    #[serde(rename = "L")]
    pub distance: usize,
    pub side: Side,
    pub grade: Grade,
    pub bits: String,
}

impl ChainFile {
    pub fn from_chain(lat: &Lattice, c: &Chain) -> Self {
        ChainFile {
            family: lat.kind(),
            distance: lat.distance(),
            side: lat.side(),
            grade: c.grade,
            bits: c.bits.to_hex(),
        }
    }

    pub fn code_family(&self) -> Result<CodeFamily> {
        CodeFamily::new(self.family, self.distance)
    }

    /// Decodes the bit string against the lattice it claims to live on.
    pub fn to_chain(&self, lat: &Lattice) -> Result<Chain> {
        if lat.kind() != self.family || lat.distance() != self.distance || lat.side() != self.side {
            return Err(Error::Format(format!(
                "chain is for {} L={} {}, lattice is {} L={} {}",
                self.family,
                self.distance,
                self.side.name(),
                lat.kind(),
                lat.distance(),
                lat.side().name()
            )));
        }
        let len = lat.face_count(self.grade);
        let bits = Bits::from_hex(len, &self.bits).ok_or_else(|| {
            Error::Format(format!(
                "bits must be {} hex digits encoding {len} bits",
                2 * len.div_ceil(8)
            ))
        })?;
        Ok(Chain::new(self.grade, bits))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chain file serializes")
    }
}
