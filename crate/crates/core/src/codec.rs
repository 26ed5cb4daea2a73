//! Block balancing of B_h strings into Dyck codewords, and decoding of a
//! pooled composition multiset back to the set of source strings.
//!
//! A source string of length `n` is left-padded with zeros to `q^2` with
//! `q = ceil(sqrt(n))`, split into `q` blocks, and blocks are complemented so
//! the running digital sum stays near zero. The codeword is
//! `1^a r u 1^x 0^y`, where `r` flags the complemented blocks and the tail
//! runs make the whole string balanced.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bhcode::{invert_parity, BhCodebook};
use crate::bits::BitString;
use crate::composition::{pool, CompositionMultiset};
use crate::error::{Error, Result};
use crate::sums::{split_pool, Side};

/// Length of the leading run of ones for block size `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadRun {
    /// `floor(5q/2) + 1`: keeps every proper prefix strictly more than half ones.
    #[default]
    Strict,
    /// `ceil(5q/2)`: the literal constant. For even `q` some prefixes can
    /// end up exactly balanced.
    Ceil,
}

impl LeadRun {
    pub fn len(self, q: usize) -> usize {
        match self {
            LeadRun::Strict => 5 * q / 2 + 1,
            LeadRun::Ceil => (5 * q).div_ceil(2),
        }
    }
}

/// A balanced string and the flags recording which blocks were complemented.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedPair {
    pub u: BitString,
    pub r: BitString,
}

fn block_size(n: usize) -> Result<usize> {
    let q = n.isqrt();
    if q * q != n {
        return Err(Error::InvalidParameter(format!("length {n} is not a perfect square")));
    }
    Ok(q)
}

/// Complements block `j >= 2` exactly when its running digital sum has the
/// same sign as that of the blocks before it, zero counting as nonnegative.
pub fn block_balance(s: &BitString) -> Result<BalancedPair> {
    let q = block_size(s.len())?;
    let (u, r) = balance_bits(s.bits(), q);
    Ok(BalancedPair { u: BitString::from_vec(u), r: BitString::from_vec(r) })
}

pub(crate) fn balance_bits(s: &[u8], q: usize) -> (Vec<u8>, Vec<u8>) {
    let mut u = Vec::with_capacity(s.len());
    let mut r = Vec::with_capacity(q);
    let mut running = 0i64;
    for (j, block) in s.chunks(q).enumerate() {
        let rds: i64 = block.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum();
        let flip = j > 0 && ((running < 0) == (rds < 0));
        r.push(u8::from(flip));
        u.extend(block.iter().map(|&b| if flip { 1 - b } else { b }));
        running += if flip { -rds } else { rds };
    }
    (u, r)
}

/// Undoes [`block_balance`]. Being linear, it also maps XORs of balanced
/// pairs to XORs of their sources.
pub fn unbalance(u: &BitString, r: &BitString) -> Result<BitString> {
    let q = r.len();
    if q * q != u.len() {
        return Err(Error::LengthMismatch { expected: q * q, found: u.len() });
    }
    Ok(BitString::from_vec(unbalance_bits(u.bits(), r.bits())))
}

pub(crate) fn unbalance_bits(u: &[u8], r: &[u8]) -> Vec<u8> {
    let q = r.len();
    u.iter().enumerate().map(|(i, &b)| b ^ r[i / q]).collect()
}

/// Kinds of codeword segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Lead,
    Flags,
    /// Check bits protecting the flags, written as complementary pairs.
    FlagCheck,
    Data,
    /// Check bits protecting the running parities, as complementary pairs.
    IntegralCheck,
    /// Binary expansions of residue check symbols, as complementary pairs.
    ResidueCheck,
    TailOnes,
    TailZeros,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: usize,
    pub len: usize,
}

/// Where each part of a codeword sits; serialized with the codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    /// Source length before padding.
    pub n: usize,
    #[serde(rename = "N")]
    pub total_len: usize,
    pub pad: usize,
    pub block: usize,
    pub segments: Vec<Segment>,
}

impl Layout {
    pub fn segment(&self, kind: SegmentKind) -> Option<Segment> {
        self.segments.iter().copied().find(|s| s.kind == kind)
    }

    /// Positions of a segment, empty if absent.
    pub fn range(&self, kind: SegmentKind) -> Range<usize> {
        self.segment(kind).map_or(0..0, |s| s.start..s.start + s.len)
    }
}

/// Appends the tail runs that balance `1^lead body` to length `total_len`.
pub(crate) fn assemble(
    lead: usize,
    body: &[(SegmentKind, Vec<u8>)],
    total_len: usize,
    source_len: usize,
    pad: usize,
    block: usize,
) -> Result<(BitString, Layout)> {
    let mut bits = vec![1u8; lead];
    let mut segments = vec![Segment { kind: SegmentKind::Lead, start: 0, len: lead }];
    for (kind, part) in body {
        segments.push(Segment { kind: *kind, start: bits.len(), len: part.len() });
        bits.extend_from_slice(part);
    }
    let w = bits.iter().filter(|&&b| b == 1).count();
    let half = total_len / 2;
    let zeros = bits.len() - w;
    if total_len % 2 == 1 || w > half || zeros > half {
        return Err(Error::InvalidParameter(format!("no room to balance a body of length {} within {total_len}", bits.len())));
    }
    segments.push(Segment { kind: SegmentKind::TailOnes, start: bits.len(), len: half - w });
    bits.extend(std::iter::repeat(1).take(half - w));
    segments.push(Segment { kind: SegmentKind::TailZeros, start: bits.len(), len: half - zeros });
    bits.extend(std::iter::repeat(0).take(half - zeros));
    Ok((BitString::from_vec(bits), Layout { n: source_len, total_len, pad, block, segments }))
}

/// Fixed sizes of the plain codeword for a given source length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub source_len: usize,
    pub pad: usize,
    pub block: usize,
    pub lead: usize,
    pub total_len: usize,
}

impl Geometry {
    /// `N = q^2 + ceil(17q/2)`, rounded up to even.
    pub fn new(source_len: usize, lead: LeadRun) -> Result<Self> {
        if source_len == 0 {
            return Err(Error::EmptyString);
        }
        let q = source_len.isqrt();
        let q = if q * q < source_len { q + 1 } else { q };
        let padded = q * q;
        let raw = padded + (17 * q).div_ceil(2);
        Ok(Self { source_len, pad: padded - source_len, block: q, lead: lead.len(q), total_len: raw + raw % 2 })
    }

    pub fn padded_len(&self) -> usize {
        self.block * self.block
    }

    /// Zero-padded copy of `s`.
    pub(crate) fn pad_bits(&self, s: &[u8]) -> Vec<u8> {
        std::iter::repeat(0).take(self.pad).chain(s.iter().copied()).collect()
    }
}

/// A codeword together with its layout and source string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McCodeword {
    pub bits: BitString,
    pub layout: Layout,
    pub source: BitString,
}

/// Encodes one source string (any length; padded as needed).
pub fn encode(s: &BitString, lead: LeadRun) -> Result<McCodeword> {
    let g = Geometry::new(s.len(), lead)?;
    let (u, r) = balance_bits(&g.pad_bits(s.bits()), g.block);
    let body = [(SegmentKind::Flags, r), (SegmentKind::Data, u)];
    let (bits, layout) = assemble(g.lead, &body, g.total_len, g.source_len, g.pad, g.block)?;
    Ok(McCodeword { bits, layout, source: s.clone() })
}

/// Splits a complete pool into its prefix and suffix multisets.
pub fn separate_pool(
    pool: &CompositionMultiset,
    n_total: usize,
    hbar: usize,
) -> Result<(CompositionMultiset, CompositionMultiset)> {
    if pool.max_len() > n_total {
        return Err(Error::CountMismatch { length: pool.max_len(), prefixes: 0, suffixes: 0, expected: 0 });
    }
    let mut prefixes = CompositionMultiset::new();
    let mut suffixes = CompositionMultiset::new();
    for (i, split) in split_pool(pool, n_total, hbar).into_iter().enumerate() {
        if !(split.prefix_complete && split.suffix_complete) {
            return Err(Error::CountMismatch {
                length: i + 1,
                prefixes: split.prefix.len(),
                suffixes: split.suffix.len(),
                expected: hbar,
            });
        }
        prefixes.extend(split.prefix.iter().copied());
        suffixes.extend(split.suffix.iter().copied());
    }
    Ok((prefixes, suffixes))
}

/// Reads the real sum of `hbar` strings from their prefix compositions:
/// symbol `i` is the ones at length `i` minus the ones at length `i - 1`.
pub fn sum_from_prefixes(prefixes: &CompositionMultiset, n_total: usize, hbar: usize) -> Result<Vec<u32>> {
    let mut prev = 0i64;
    let mut out = Vec::with_capacity(n_total);
    for len in 1..=n_total {
        let at = prefixes.at_length(len);
        let count: usize = at.iter().map(|(_, m)| m).sum();
        if count != hbar {
            return Err(Error::CountMismatch { length: len, prefixes: count, suffixes: 0, expected: hbar });
        }
        let total: i64 = at.iter().map(|(c, m)| (c.ones * m) as i64).sum();
        let t = total - prev;
        if !(0..=hbar as i64).contains(&t) {
            return Err(Error::NegativeIncrement { position: len, value: t, max: hbar });
        }
        out.push(t as u32);
        prev = total;
    }
    Ok(out)
}

/// Separation and sum recovery in one step; `side` picks which half to read.
pub(crate) fn clean_sum(pool: &CompositionMultiset, n_total: usize, hbar: usize, side: Side) -> Result<Vec<u32>> {
    let (prefixes, suffixes) = separate_pool(pool, n_total, hbar)?;
    match side {
        Side::Prefix => sum_from_prefixes(&prefixes, n_total, hbar),
        Side::Suffix => {
            let mut rev = sum_from_prefixes(&suffixes, n_total, hbar)?;
            rev.reverse();
            Ok(rev)
        }
    }
}

/// A B_h codebook together with the encoding parameters of its codewords.
#[derive(Clone, Debug)]
pub struct McCodebook {
    bh: BhCodebook,
    lead: LeadRun,
    geometry: Geometry,
}

impl McCodebook {
    pub fn new(bh: BhCodebook, lead: LeadRun) -> Result<Self> {
        let geometry = Geometry::new(bh.n(), lead)?;
        Ok(Self { bh, lead, geometry })
    }

    pub fn bh(&self) -> &BhCodebook {
        &self.bh
    }

    pub fn lead(&self) -> LeadRun {
        self.lead
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn total_len(&self) -> usize {
        self.geometry.total_len
    }

    /// Encodes a member of the codebook.
    pub fn encode(&self, s: &BitString) -> Result<McCodeword> {
        if self.bh.index_of(s).is_none() {
            return Err(Error::InvalidParameter(format!("{s} is not in the codebook")));
        }
        encode(s, self.lead)
    }

    /// Codewords of every member, in codebook order.
    pub fn codewords(&self) -> Result<Vec<BitString>> {
        self.bh.strings().iter().map(|s| encode(s, self.lead).map(|c| c.bits)).collect()
    }

    /// `log2 |C| / N`.
    pub fn rate(&self) -> f64 {
        (self.bh.len() as f64).log2() / self.total_len() as f64
    }
}

/// Rate `log2_size / N` of a codebook with `2^log2_size` members of source length `n`.
pub fn measured_rate(log2_size: f64, source_len: usize, lead: LeadRun) -> Result<f64> {
    Ok(log2_size / Geometry::new(source_len, lead)?.total_len as f64)
}

/// Recovers the set of source strings whose codewords were pooled.
pub fn decode_mixture(pool: &CompositionMultiset, codebook: &McCodebook) -> Result<Vec<BitString>> {
    let g = codebook.geometry;
    let n_total = g.total_len;
    if pool.len() % (2 * n_total) != 0 {
        return Err(Error::InconsistentPoolSize { size: pool.len(), codeword_len: n_total });
    }
    let hbar = pool.len() / (2 * n_total);
    if hbar == 0 {
        return Ok(Vec::new());
    }
    if hbar > codebook.bh.h() {
        return Err(Error::InvalidParameter(format!("pool holds {hbar} strings, more than h={}", codebook.bh.h())));
    }
    let sum = clean_sum(pool, n_total, hbar, Side::Prefix)?;
    let found = sources_from_sum(&sum, hbar, codebook)?;
    let codewords: Vec<BitString> = found.iter().map(|s| encode(s, codebook.lead).map(|c| c.bits)).collect::<Result<_>>()?;
    if &crate::composition::pool(&codewords)? != pool {
        return Err(Error::DecodeFailure("decoded set does not reproduce the pool".into()));
    }
    Ok(found)
}

/// Maps the real sum of `hbar` codewords back to their sources.
pub(crate) fn sources_from_sum(sum: &[u32], hbar: usize, codebook: &McCodebook) -> Result<Vec<BitString>> {
    let g = codebook.geometry;
    if sum[..g.lead].iter().any(|&v| v as usize != hbar) {
        return Err(Error::DecodeFailure("leading run does not match the string count".into()));
    }
    let parity = |range: Range<usize>| sum[range].iter().map(|&v| (v % 2) as u8).collect::<Vec<u8>>();
    let r = parity(g.lead..g.lead + g.block);
    let u = parity(g.lead + g.block..g.lead + g.block + g.padded_len());
    let padded = unbalance_bits(&u, &r);
    if padded[..g.pad].iter().any(|&b| b == 1) {
        return Err(Error::DecodeFailure("padding is not zero".into()));
    }
    invert_parity(&codebook.bh, &padded[g.pad..], hbar)
}

/// Pools the codewords of a set of sources.
pub fn pool_sources(sources: &[BitString], codebook: &McCodebook) -> Result<CompositionMultiset> {
    let words: Vec<BitString> = sources.iter().map(|s| codebook.encode(s).map(|c| c.bits)).collect::<Result<_>>()?;
    pool(&words)
}
