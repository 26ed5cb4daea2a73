//! Sum strings read off prefix or suffix compositions, and the per-length
//! split of a pool into its prefix and suffix sides.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::composition::{Composition, CompositionMultiset};
use crate::error::{Error, Result};

/// Which end of the strings a composition was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Prefix,
    Suffix,
}

/// A coordinate-wise real sum with some symbols erased.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialSumString(Vec<Option<u32>>);

impl PartialSumString {
    pub fn new(symbols: Vec<Option<u32>>) -> Self {
        Self(symbols)
    }

    pub fn complete(values: &[u32]) -> Self {
        Self(values.iter().map(|&v| Some(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Option<u32>] {
        &self.0
    }

    /// Symbol at 0-based position `i`.
    pub fn get(&self, i: usize) -> Option<u32> {
        self.0[i]
    }

    /// 0-based positions of erased symbols.
    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i].is_none()).collect()
    }

    pub fn erasures(&self) -> usize {
        self.0.iter().filter(|s| s.is_none()).count()
    }

    /// All values, if nothing is erased.
    pub fn values(&self) -> Option<Vec<u32>> {
        self.0.iter().copied().collect()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }
}

/// Digits with `ε` for erasures; comma-separated once any value exceeds 9.
impl fmt::Display for PartialSumString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().flatten().any(|&v| v > 9);
        let parts: Vec<String> = self.0.iter().map(|s| s.map_or_else(|| "ε".to_string(), |v| v.to_string())).collect();
        f.write_str(&parts.join(if wide { "," } else { "" }))
    }
}

impl fmt::Debug for PartialSumString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialSumString({self})")
    }
}

/// Accepts `21εε10`, with `e` or `?` as alternative erasure marks, or a
/// comma-separated list for multi-digit values.
impl FromStr for PartialSumString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse sum string {text:?}"));
        let erased = |t: &str| matches!(t, "ε" | "e" | "?");
        if text.contains(',') {
            return text
                .split(',')
                .map(|t| t.trim())
                .map(|t| if erased(t) { Ok(None) } else { t.parse().map(Some).map_err(|_| bad()) })
                .collect::<Result<_>>()
                .map(Self);
        }
        text.trim()
            .chars()
            .map(|c| match c {
                'ε' | 'e' | '?' => Ok(None),
                d => d.to_digit(10).map(Some).ok_or_else(bad),
            })
            .collect::<Result<_>>()
            .map(Self)
    }
}

impl Serialize for PartialSumString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialSumString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The compositions of one fragment length, assigned to sides.
///
/// Fragments with more than half ones are prefixes of Dyck strings, fewer
/// than half are suffixes, and exactly half (even lengths) may be either.
/// Ties are assigned so that both sides reach `hbar` when the counts allow
/// exactly one such assignment; otherwise neither side counts as complete.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct LengthSplit {
    pub prefix: Vec<Composition>,
    pub suffix: Vec<Composition>,
    pub prefix_complete: bool,
    pub suffix_complete: bool,
    /// More fragments than `hbar` are forced onto a side.
    pub surplus: bool,
}

impl LengthSplit {
    pub fn side(&self, side: Side) -> &[Composition] {
        match side {
            Side::Prefix => &self.prefix,
            Side::Suffix => &self.suffix,
        }
    }

    pub fn complete(&self, side: Side) -> bool {
        match side {
            Side::Prefix => self.prefix_complete,
            Side::Suffix => self.suffix_complete,
        }
    }

    pub fn ones(&self, side: Side) -> usize {
        self.side(side).iter().map(|c| c.ones).sum()
    }
}

pub(crate) fn split_length(pool: &CompositionMultiset, len: usize, hbar: usize) -> LengthSplit {
    let mut out = LengthSplit::default();
    let mut ties = Vec::new();
    for (c, m) in pool.at_length(len) {
        let dest = match (2 * c.ones).cmp(&len) {
            std::cmp::Ordering::Greater => &mut out.prefix,
            std::cmp::Ordering::Less => &mut out.suffix,
            std::cmp::Ordering::Equal => &mut ties,
        };
        dest.extend(std::iter::repeat(c).take(m));
    }
    let (p, s, t) = (out.prefix.len(), out.suffix.len(), ties.len());
    if p > hbar || s > hbar || p + s + t > 2 * hbar {
        out.surplus = true;
        let x = t.min(hbar.saturating_sub(p));
        out.prefix.extend_from_slice(&ties[..x]);
        out.suffix.extend_from_slice(&ties[x..]);
        return out;
    }
    // Number of ties that may go to the prefix side.
    let lo = t.saturating_sub(hbar - s);
    let hi = t.min(hbar - p);
    out.prefix.extend_from_slice(&ties[..lo]);
    out.suffix.extend_from_slice(&ties[lo..]);
    if lo == hi {
        out.prefix_complete = out.prefix.len() == hbar;
        out.suffix_complete = out.suffix.len() == hbar;
    }
    out
}

/// Splits for lengths `1..=n_total`; entry `i - 1` holds length `i`.
pub(crate) fn split_pool(pool: &CompositionMultiset, n_total: usize, hbar: usize) -> Vec<LengthSplit> {
    (1..=n_total).map(|len| split_length(pool, len, hbar)).collect()
}

/// Total ones per side at lengths `0..=n_total`, where known. The empty
/// fragment has none and the full length holds `hbar * n_total / 2` because
/// every string is balanced.
pub(crate) fn side_totals(splits: &[LengthSplit], side: Side, hbar: usize) -> Vec<Option<i64>> {
    let n_total = splits.len();
    let mut out: Vec<Option<i64>> = std::iter::once(Some(0))
        .chain(splits.iter().map(|s| s.complete(side).then(|| s.ones(side) as i64)))
        .collect();
    out[n_total] = Some((hbar * n_total / 2) as i64);
    out
}

/// Differences of consecutive totals, in the reading order of that side.
pub(crate) fn increments(totals: &[Option<i64>]) -> Vec<Option<i64>> {
    totals.windows(2).map(|w| Some(w[1]? - w[0]?)).collect()
}

/// Increments as a sum string; values outside `0..=hbar` count as erased.
pub(crate) fn to_partial(incs: &[Option<i64>], hbar: usize) -> PartialSumString {
    PartialSumString(
        incs.iter().map(|v| v.and_then(|x| (0..=hbar as i64).contains(&x).then_some(x as u32))).collect(),
    )
}
