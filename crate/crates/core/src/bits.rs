//! Binary strings and their running digital sums.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonempty string over {0, 1}, one byte per symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<u8>);

impl BitString {
    /// Builds a string from 0/1 values.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyString);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(b))));
        }
        Ok(Self(bits))
    }

    /// Builds a string from bits already known to be 0/1 and nonempty.
    pub(crate) fn from_vec(bits: Vec<u8>) -> Self {
        debug_assert!(!bits.is_empty() && bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_vec(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Self::from_vec(vec![1; n])
    }

    /// The `n`-bit big-endian expansion of `value`.
    pub fn from_index(value: u64, n: usize) -> Self {
        Self::from_vec((0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Running digital sum `2 * wt(s_1..s_i) - i`; `rds(0) = 0`.
    pub fn rds(&self, i: usize) -> i64 {
        let w = self.0[..i].iter().filter(|&&b| b == 1).count() as i64;
        2 * w - i as i64
    }

    /// `[R_1, ..., R_n]`.
    pub fn rds_profile(&self) -> Vec<i64> {
        let mut acc = 0i64;
        self.0
            .iter()
            .map(|&b| {
                acc += if b == 1 { 1 } else { -1 };
                acc
            })
            .collect()
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|&b| 1 - b).collect())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Self(bits)
    }

    /// Symbols `start..end` as a new string; panics on an empty range.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self::from_vec(self.0[start..end].to_vec())
    }

    /// Weight of the first `i` symbols.
    pub fn prefix_weight(&self, i: usize) -> usize {
        self.0[..i].iter().filter(|&&b| b == 1).count()
    }

    /// Weight of the last `i` symbols.
    pub fn suffix_weight(&self, i: usize) -> usize {
        self.0[self.len() - i..].iter().filter(|&&b| b == 1).count()
    }
}

/// Coordinate-wise sum over the reals.
pub fn real_sum<'a, I>(strings: I) -> Vec<u32>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut out: Vec<u32> = Vec::new();
    for s in strings {
        if out.is_empty() {
            out = vec![0; s.len()];
        }
        for (o, &b) in out.iter_mut().zip(s.bits()) {
            *o += u32::from(b);
        }
    }
    out
}

/// Formats a sum vector as digits, e.g. `211110`.
pub fn format_sum(sum: &[u32]) -> String {
    sum.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(if sum.iter().any(|&v| v > 9) { "," } else { "" })
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
