//! Redundancy that lets a pool with missing compositions still be decoded.
//!
//! * One-step: the source is encoded with a binary code that absorbs the
//!   block-wide damage of an erased flag, then balanced as usual.
//! * Two-step: the flags get their own code, written after them as
//!   complementary pairs, so a lost flag costs one symbol instead of a block.
//! * Integral: running parities of the balanced string are protected; a
//!   missing composition then erases one symbol instead of two.
//! * Prime: the real sums of the balanced string are protected by a code over
//!   the smallest prime field above `h`.

pub mod prime;

use serde::{Deserialize, Serialize};

use crate::bhcode::{invert_parity, BhCodebook};
use crate::bits::BitString;
use crate::channel::{reconstruct_redundancy_free, Merge};
use crate::codec::{assemble, balance_bits, unbalance_bits, Geometry, LeadRun, Layout, SegmentKind};
use crate::composition::{pool, CompositionMultiset};
use crate::error::{Error, Result};
use crate::gf2::{LinearCode, LinearCodeConfig};
use crate::sums::{side_totals, split_pool, PartialSumString, Side};
use crate::tables;

use prime::{next_prime_above, PrimeCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    OneStep,
    TwoStep,
    Integral,
    Prime,
}

/// An encoded string with its scheme and layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EccCodeword {
    pub bits: BitString,
    pub scheme: Scheme,
    pub t: usize,
    pub layout: Layout,
    pub source: BitString,
}

/// JSON form `{"scheme", "t", "code": {...}}`; omitted codes fall back to
/// the shipped tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<LinearCodeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_code: Option<LinearCodeConfig>,
    /// Largest mixture size; sets the prime of the prime scheme.
    #[serde(default = "default_h")]
    pub h: usize,
    #[serde(default)]
    pub lead: LeadRun,
}

fn default_h() -> usize {
    2
}

/// Encoder and decoder for one scheme at one source length.
#[derive(Clone, Debug)]
pub struct EccCodec {
    scheme: Scheme,
    t: usize,
    lead: LeadRun,
    source_len: usize,
    code: LinearCode,
    flag: Option<LinearCode>,
    residue: Option<PrimeCode>,
    geometry: Geometry,
    check_len: usize,
}

fn pairs(bits: &[u8]) -> Vec<u8> {
    bits.iter().flat_map(|&b| [b, 1 - b]).collect()
}

/// Running mod-2 sums `s_1, s_1 + s_2, ...`.
pub fn integral(s: &BitString) -> BitString {
    BitString::from_vec(running_parity(s.bits()))
}

fn running_parity(bits: &[u8]) -> Vec<u8> {
    bits.iter()
        .scan(0u8, |acc, &b| {
            *acc ^= b;
            Some(*acc)
        })
        .collect()
}

fn derivative(bits: &[u8]) -> Vec<u8> {
    let mut prev = 0;
    bits.iter()
        .map(|&b| {
            let d = b ^ prev;
            prev = b;
            d
        })
        .collect()
}

/// Pair-balanced redundancy whose running parities at odd positions,
/// continued from `last`, read out `checks`.
fn integral_redundancy(last: u8, checks: &[u8]) -> Vec<u8> {
    let mut r = Vec::with_capacity(2 * checks.len());
    for (i, &c) in checks.iter().enumerate() {
        let odd = if i == 0 { c ^ last } else { checks[i - 1] ^ c ^ r[2 * i - 1] };
        r.push(odd);
        r.push(1 - odd);
    }
    r
}

impl EccCodec {
    fn build(
        scheme: Scheme,
        t: usize,
        lead: LeadRun,
        source_len: usize,
        code: LinearCode,
        flag: Option<LinearCode>,
        residue: Option<PrimeCode>,
    ) -> Result<Self> {
        let inner_len = match scheme {
            Scheme::OneStep | Scheme::TwoStep => code.n(),
            Scheme::Integral | Scheme::Prime => source_len,
        };
        let geometry = Geometry::new(inner_len, lead)?;
        let check_len = match scheme {
            Scheme::OneStep => 0,
            Scheme::TwoStep => 2 * flag.as_ref().map_or(0, |f| f.n() - f.k()),
            Scheme::Integral => 2 * (code.n() - code.k()),
            Scheme::Prime => residue.as_ref().map_or(0, |c| 2 * c.redundancy() * c.symbol_bits()),
        };
        Ok(Self { scheme, t, lead, source_len, code, flag, residue, geometry, check_len })
    }

    /// Source strings of length `code.k()`; `code` must fill `t (q + 1)`
    /// erasures where `q^2` is its padded length.
    pub fn one_step(t: usize, code: LinearCode, lead: LeadRun) -> Result<Self> {
        let out = Self::build(Scheme::OneStep, t, lead, code.k(), code, None, None)?;
        let needed = t * (out.geometry.block + 1);
        if out.code.erasure_capability() < needed {
            return Err(Error::CapabilityTooSmall { needed, available: out.code.erasure_capability() });
        }
        Ok(out)
    }

    /// `data` and `flag` must each fill `t` erasures, and `flag` must take
    /// the `q` flags of the balanced data word.
    pub fn two_step(t: usize, data: LinearCode, flag: LinearCode, lead: LeadRun) -> Result<Self> {
        let out = Self::build(Scheme::TwoStep, t, lead, data.k(), data, Some(flag), None)?;
        let flag = out.flag.as_ref().expect("set above");
        if flag.k() != out.geometry.block {
            return Err(Error::LengthMismatch { expected: out.geometry.block, found: flag.k() });
        }
        let available = out.code.erasure_capability().min(flag.erasure_capability());
        if available < t {
            return Err(Error::CapabilityTooSmall { needed: t, available });
        }
        Ok(out)
    }

    /// `code` protects the running parities of the `q + q^2` balanced
    /// symbols and must fill `floor(t/2)` erasures.
    pub fn integral(source_len: usize, t: usize, code: LinearCode, lead: LeadRun) -> Result<Self> {
        let out = Self::build(Scheme::Integral, t, lead, source_len, code, None, None)?;
        let g = out.geometry;
        if out.code.k() != g.block + g.padded_len() {
            return Err(Error::LengthMismatch { expected: g.block + g.padded_len(), found: out.code.k() });
        }
        if out.code.erasure_capability() < t / 2 {
            return Err(Error::CapabilityTooSmall { needed: t / 2, available: out.code.erasure_capability() });
        }
        Ok(out)
    }

    /// Residues modulo the smallest prime above `h` protect the real sums
    /// of the `q + q^2` balanced symbols against `t <= 2` erasures.
    pub fn prime(source_len: usize, t: usize, h: usize, lead: LeadRun) -> Result<Self> {
        let g = Geometry::new(source_len, lead)?;
        let residue = PrimeCode::new(next_prime_above(h), g.block + g.padded_len(), t)?;
        Self::build(Scheme::Prime, t, lead, source_len, LinearCode::uncoded(source_len), None, Some(residue))
    }

    /// The shipped codes for 16-bit sources (any length when `t = 0`).
    pub fn standard(scheme: Scheme, source_len: usize, t: usize, h: usize) -> Result<Self> {
        let lead = LeadRun::Strict;
        let table = |text| tables::code(text);
        let sixteen = || {
            if source_len == 16 {
                Ok(())
            } else {
                Err(Error::Unsupported(format!("shipped codes take 16-bit sources, got {source_len}")))
            }
        };
        match (scheme, t) {
            (Scheme::OneStep, 0) => Self::one_step(0, LinearCode::uncoded(source_len), lead),
            (Scheme::OneStep, 1) => sixteen().and_then(|_| Self::one_step(1, table(tables::BCH_43_16)?, lead)),
            (Scheme::OneStep, 2) => sixteen().and_then(|_| Self::one_step(2, table(tables::BCH_61_16)?, lead)),
            (Scheme::TwoStep, 0) => {
                let q = Geometry::new(source_len, lead)?.block;
                Self::two_step(0, LinearCode::uncoded(source_len), LinearCode::uncoded(q), lead)
            }
            (Scheme::TwoStep, 1) => {
                sixteen()?;
                Self::two_step(1, table(tables::BCH_55_16)?, LinearCode::single_parity(8), lead)
            }
            (Scheme::TwoStep, 2) => {
                sixteen()?;
                Self::two_step(2, table(tables::BCH_55_16)?, table(tables::HAMMING_12_8)?, lead)
            }
            (Scheme::Integral, t) if t <= 3 => {
                let g = Geometry::new(source_len, lead)?;
                let k = g.block + g.padded_len();
                let code = if t < 2 { LinearCode::uncoded(k) } else { LinearCode::single_parity(k) };
                Self::integral(source_len, t, code, lead)
            }
            (Scheme::Prime, t) if t <= 2 => Self::prime(source_len, t, h, lead),
            _ => Err(Error::Unsupported(format!("no shipped {scheme:?} code for t={t}"))),
        }
    }

    /// Two-step codes able to correct `t` same-length substitutions: each
    /// code corrects `2t` symbol errors.
    pub fn standard_substitution(t: usize) -> Result<Self> {
        let flag = match t {
            1 => tables::code(tables::BCH_18_8)?,
            2 => tables::code(tables::BCH_28_8)?,
            _ => return Err(Error::Unsupported(format!("no shipped substitution code for t={t}"))),
        };
        Self::two_step(t, tables::code(tables::BCH_55_16)?, flag, LeadRun::Strict)
    }

    pub fn from_config(cfg: &SchemeConfig, source_len: usize) -> Result<Self> {
        let code = cfg.code.as_ref().map(LinearCode::from_config).transpose()?;
        let flag = cfg.flag_code.as_ref().map(LinearCode::from_config).transpose()?;
        match (cfg.scheme, code, flag) {
            (_, None, None) => Self::standard(cfg.scheme, source_len, cfg.t, cfg.h),
            (Scheme::OneStep, Some(code), None) => Self::one_step(cfg.t, code, cfg.lead),
            (Scheme::TwoStep, Some(code), Some(flag)) => Self::two_step(cfg.t, code, flag, cfg.lead),
            (Scheme::Integral, Some(code), None) => Self::integral(source_len, cfg.t, code, cfg.lead),
            _ => Err(Error::InvalidParameter("codes given do not fit the scheme".into())),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn lead(&self) -> LeadRun {
        self.lead
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Sizes of the balanced inner word.
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn flag_code(&self) -> Option<&LinearCode> {
        self.flag.as_ref()
    }

    pub fn residue_code(&self) -> Option<&PrimeCode> {
        self.residue.as_ref()
    }

    /// Length of the pair-coded check segment.
    pub fn check_len(&self) -> usize {
        self.check_len
    }

    fn extra(&self) -> usize {
        usize::from(self.check_len > 0)
    }

    fn lead_len(&self) -> usize {
        self.geometry.lead + self.extra()
    }

    pub fn total_len(&self) -> usize {
        self.geometry.total_len + self.check_len + 2 * self.extra()
    }

    fn inner(&self, s: &BitString) -> Result<Vec<u8>> {
        if s.len() != self.source_len {
            return Err(Error::LengthMismatch { expected: self.source_len, found: s.len() });
        }
        let word = match self.scheme {
            Scheme::OneStep | Scheme::TwoStep => self.code.encode(s.bits())?,
            Scheme::Integral | Scheme::Prime => s.bits().to_vec(),
        };
        Ok(self.geometry.pad_bits(&word))
    }

    pub fn encode(&self, s: &BitString) -> Result<EccCodeword> {
        let (u, r) = balance_bits(&self.inner(s)?, self.geometry.block);
        let body = match self.scheme {
            Scheme::OneStep => vec![(SegmentKind::Flags, r), (SegmentKind::Data, u)],
            Scheme::TwoStep => {
                let checks = self.flag.as_ref().expect("two-step has a flag code").parity_of(&r)?;
                vec![(SegmentKind::Flags, r), (SegmentKind::FlagCheck, pairs(&checks)), (SegmentKind::Data, u)]
            }
            Scheme::Integral => {
                let y: Vec<u8> = r.iter().chain(&u).copied().collect();
                let running = running_parity(&y);
                let checks = self.code.parity_of(&running)?;
                let red = integral_redundancy(*running.last().expect("nonempty"), &checks);
                vec![(SegmentKind::Flags, r), (SegmentKind::Data, u), (SegmentKind::IntegralCheck, red)]
            }
            Scheme::Prime => {
                let code = self.residue.as_ref().expect("prime scheme has a residue code");
                let y: Vec<u64> = r.iter().chain(&u).map(|&b| u64::from(b)).collect();
                let bits: Vec<u8> = code
                    .checks(&y)
                    .iter()
                    .flat_map(|&c| (0..code.symbol_bits()).map(move |b| ((c >> b) & 1) as u8))
                    .collect();
                vec![(SegmentKind::Flags, r), (SegmentKind::Data, u), (SegmentKind::ResidueCheck, pairs(&bits))]
            }
        };
        let g = self.geometry;
        let (bits, layout) = assemble(self.lead_len(), &body, self.total_len(), self.source_len, g.pad, g.block)?;
        Ok(EccCodeword { bits, scheme: self.scheme, t: self.t, layout, source: s.clone() })
    }

    /// Pools the codewords of `sources`.
    pub fn pool(&self, sources: &[BitString]) -> Result<CompositionMultiset> {
        let words: Vec<BitString> = sources.iter().map(|s| self.encode(s).map(|c| c.bits)).collect::<Result<_>>()?;
        pool(&words)
    }

    /// Sum symbols known from either side, all of them when the two sides
    /// and the weight pin a single completion.
    fn symbols(&self, observed: &CompositionMultiset, hbar: usize) -> Result<PartialSumString> {
        match reconstruct_redundancy_free(observed, self.total_len(), hbar, None) {
            Ok(r) => Ok(match r.outcome {
                Merge::Exact { sum } => PartialSumString::complete(&sum),
                Merge::Ambiguous { merged, .. } => merged,
            }),
            Err(Error::Conflict { .. } | Error::NoSolution) => Err(Error::DecodeFailure("partial sums contradict each other".into())),
            Err(e) => Err(e),
        }
    }

    /// The padded inner word from flag and data parities, with erasures.
    fn unflip(&self, r: &[Option<u8>], u: &[Option<u8>]) -> Vec<Option<u8>> {
        let g = self.geometry;
        (0..g.padded_len())
            .map(|i| {
                if i < g.pad {
                    return Some(0);
                }
                match (r[i / g.block], u[i]) {
                    (Some(a), Some(b)) => Some(a ^ b),
                    _ => None,
                }
            })
            .collect()
    }

    fn strip_pad(&self, padded: &[u8]) -> Result<Vec<u8>> {
        let pad = self.geometry.pad;
        if padded[..pad].iter().any(|&b| b == 1) {
            return Err(Error::DecodeFailure("padding is not zero".into()));
        }
        Ok(padded[pad..].to_vec())
    }

    /// XOR of the `hbar` sources behind an erased pool.
    fn source_parity(&self, observed: &CompositionMultiset, hbar: usize) -> Result<Vec<u8>> {
        let g = self.geometry;
        let (lead, q) = (self.lead_len(), g.block);
        if self.scheme == Scheme::Integral {
            return self.integral_parity(observed, hbar);
        }
        let sym = self.symbols(observed, hbar)?;
        let par = |i: usize| sym.get(i).map(|v| (v % 2) as u8);
        let data_start = match self.scheme {
            Scheme::TwoStep => lead + q + self.check_len,
            _ => lead + q,
        };
        let u: Vec<Option<u8>> = (0..g.padded_len()).map(|i| par(data_start + i)).collect();
        let mut r: Vec<Option<u8>> = (0..q).map(|j| par(lead + j)).collect();
        r[0] = Some(0);
        match self.scheme {
            Scheme::OneStep => {
                let word = self.unflip(&r, &u);
                let word = self.code.decode_erasures(&word[g.pad..])?;
                Ok(self.code.extract(&word))
            }
            Scheme::TwoStep => {
                let flag = self.flag.as_ref().expect("two-step has a flag code");
                let z = lead + q;
                let checks: Vec<Option<u8>> = (0..flag.n() - flag.k())
                    .map(|i| par(z + 2 * i).or_else(|| par(z + 2 * i + 1).map(|b| b ^ (hbar % 2) as u8)))
                    .collect();
                let flags = flag.extract(&flag.decode_erasures(&flag.assemble_word(&r, &checks))?);
                let known: Vec<Option<u8>> = flags.into_iter().map(Some).collect();
                let word = self.unflip(&known, &u);
                let word = self.code.decode_erasures(&word[g.pad..])?;
                Ok(self.code.extract(&word))
            }
            Scheme::Prime => {
                let code = self.residue.as_ref().expect("prime scheme has a residue code");
                let real = |i: usize| sym.get(i).map(u64::from);
                let mut y: Vec<Option<u64>> = (0..q + g.padded_len()).map(|j| real(lead + j)).collect();
                y[0] = Some(0);
                let bits = code.symbol_bits();
                let base = lead + q + g.padded_len();
                let checks: Vec<Option<u64>> = (0..code.redundancy())
                    .map(|i| {
                        (0..bits).try_fold(0u64, |acc, b| {
                            let at = base + 2 * (i * bits + b);
                            let v = real(at).or_else(|| real(at + 1).map(|w| hbar as u64 - w))?;
                            Some(acc + (v << b))
                        })
                    })
                    .collect();
                let sums = code.decode_erasures(&y, &checks)?;
                let parity: Vec<Option<u8>> = sums.iter().map(|&v| Some((v % 2) as u8)).collect();
                let padded: Vec<u8> = self.unflip(&parity[..q], &parity[q..]).into_iter().map(|b| b.expect("all known")).collect();
                self.strip_pad(&padded)
            }
            Scheme::Integral => unreachable!("handled above"),
        }
    }

    fn integral_parity(&self, observed: &CompositionMultiset, hbar: usize) -> Result<Vec<u8>> {
        let g = self.geometry;
        let (n_total, lead) = (self.total_len(), self.lead_len());
        let splits = split_pool(observed, n_total, hbar);
        let (pre, suf) = (side_totals(&splits, Side::Prefix, hbar), side_totals(&splits, Side::Suffix, hbar));
        let weight = (hbar * n_total / 2) as i64;
        let parity = |len: usize| {
            let total = pre[len].or_else(|| suf[n_total - len].map(|m| weight - m))?;
            Some((total - (hbar * lead) as i64).rem_euclid(2) as u8)
        };
        let y_len = g.block + g.padded_len();
        let running: Vec<Option<u8>> = (1..=y_len).map(|j| parity(lead + j)).collect();
        let checks: Vec<Option<u8>> = (0..self.code.n() - self.code.k()).map(|i| parity(lead + y_len + 2 * i + 1)).collect();
        let word = self.code.decode_erasures(&self.code.assemble_word(&running, &checks))?;
        let y = derivative(&self.code.extract(&word));
        let padded = unbalance_bits(&y[g.block..], &y[..g.block]);
        self.strip_pad(&padded)
    }

    /// Recovers the `hbar` sources behind a pool with missing compositions.
    pub fn decode(&self, observed: &CompositionMultiset, hbar: usize, codebook: &BhCodebook) -> Result<Vec<BitString>> {
        if codebook.n() != self.source_len {
            return Err(Error::LengthMismatch { expected: self.source_len, found: codebook.n() });
        }
        if hbar == 0 {
            return if observed.is_empty() { Ok(Vec::new()) } else { Err(Error::DecodeFailure("nonempty pool for no strings".into())) };
        }
        let parity = self.source_parity(observed, hbar)?;
        let found = invert_parity(codebook, &parity, hbar)?;
        let full = self.pool(&found)?;
        if !full.contains_all(observed) {
            return Err(Error::DecodeFailure("decoded set does not explain the pool".into()));
        }
        Ok(found)
    }

    /// Two-step decoding of a pool in which up to `t` compositions were
    /// replaced by others of the same length. Each side is decoded on its
    /// own; an answer is kept when its pool differs from the observed one in
    /// at most `t` compositions.
    pub fn decode_substitutions(&self, observed: &CompositionMultiset, hbar: usize, codebook: &BhCodebook) -> Result<Vec<BitString>> {
        let flag = match (&self.flag, self.scheme) {
            (Some(f), Scheme::TwoStep) => f,
            _ => return Err(Error::Unsupported("substitution decoding needs the two-step scheme".into())),
        };
        let available = flag.error_capability().min(self.code.error_capability());
        if available < 2 * self.t {
            return Err(Error::CapabilityTooSmall { needed: 2 * self.t, available });
        }
        let n_total = self.total_len();
        let mut answers: Vec<Vec<BitString>> = Vec::new();
        for side in [Side::Prefix, Side::Suffix] {
            let Ok(parity) = self.side_parity(observed, n_total, hbar, side, flag) else { continue };
            let Ok(found) = invert_parity(codebook, &parity, hbar) else { continue };
            let full = self.pool(&found)?;
            let matched: usize = full.iter().map(|(c, m)| m.min(observed.count(&c))).sum();
            if full.len() == observed.len() && full.len() - matched <= self.t && !answers.contains(&found) {
                answers.push(found);
            }
        }
        match answers.len() {
            0 => Err(Error::DecodeFailure("neither side decodes to a nearby pool".into())),
            1 => Ok(answers.pop().expect("one answer")),
            k => Err(Error::AmbiguousSolution(k)),
        }
    }

    fn side_parity(&self, observed: &CompositionMultiset, n_total: usize, hbar: usize, side: Side, flag: &LinearCode) -> Result<Vec<u8>> {
        let g = self.geometry;
        let (lead, q) = (self.lead_len(), g.block);
        let mut totals = vec![0i64; n_total + 1];
        for (len, total) in totals.iter_mut().enumerate().skip(1) {
            let ones: Vec<usize> = observed.at_length(len).iter().flat_map(|(c, m)| std::iter::repeat(c.ones).take(*m)).collect();
            if ones.len() != 2 * hbar {
                return Err(Error::CountMismatch { length: len, prefixes: ones.len(), suffixes: 0, expected: 2 * hbar });
            }
            let part = match side {
                Side::Prefix => &ones[hbar..],
                Side::Suffix => &ones[..hbar],
            };
            *total = part.iter().sum::<usize>() as i64;
        }
        totals[n_total] = (hbar * n_total / 2) as i64;
        let mut incs: Vec<u8> = totals.windows(2).map(|w| (w[1] - w[0]).rem_euclid(2) as u8).collect();
        if side == Side::Suffix {
            incs.reverse();
        }
        let r: Vec<u8> = incs[lead..lead + q].to_vec();
        let checks: Vec<u8> = (0..flag.n() - flag.k()).map(|i| incs[lead + q + 2 * i]).collect();
        let word: Vec<u8> = flag.assemble_word(&r.iter().map(|&b| Some(b)).collect::<Vec<_>>(), &checks.iter().map(|&b| Some(b)).collect::<Vec<_>>())
            .into_iter()
            .map(|b| b.expect("all known"))
            .collect();
        let flags = flag.extract(&flag.decode_errors(&word)?);
        let data_start = lead + q + self.check_len;
        let u = &incs[data_start..data_start + g.padded_len()];
        let padded = unbalance_bits(u, &flags);
        let data = self.code.decode_errors(&padded[g.pad..])?;
        Ok(self.code.extract(&data))
    }
}

/// One-step encoding with the given code.
pub fn one_step_encode(s: &BitString, t: usize, code: &LinearCode) -> Result<EccCodeword> {
    EccCodec::one_step(t, code.clone(), LeadRun::Strict)?.encode(s)
}

pub fn one_step_decode(observed: &CompositionMultiset, hbar: usize, codebook: &BhCodebook, t: usize, code: &LinearCode) -> Result<Vec<BitString>> {
    EccCodec::one_step(t, code.clone(), LeadRun::Strict)?.decode(observed, hbar, codebook)
}

/// Two-step encoding with a data code and a flag code.
pub fn two_step_encode(s: &BitString, t: usize, data: &LinearCode, flag: &LinearCode) -> Result<EccCodeword> {
    EccCodec::two_step(t, data.clone(), flag.clone(), LeadRun::Strict)?.encode(s)
}

pub fn two_step_decode(
    observed: &CompositionMultiset,
    hbar: usize,
    codebook: &BhCodebook,
    t: usize,
    data: &LinearCode,
    flag: &LinearCode,
) -> Result<Vec<BitString>> {
    EccCodec::two_step(t, data.clone(), flag.clone(), LeadRun::Strict)?.decode(observed, hbar, codebook)
}

/// Integral encoding; `code` acts on the running parities.
pub fn integral_encode(s: &BitString, t: usize, code: &LinearCode) -> Result<EccCodeword> {
    EccCodec::integral(s.len(), t, code.clone(), LeadRun::Strict)?.encode(s)
}

pub fn integral_decode(observed: &CompositionMultiset, hbar: usize, codebook: &BhCodebook, t: usize, code: &LinearCode) -> Result<Vec<BitString>> {
    EccCodec::integral(codebook.n(), t, code.clone(), LeadRun::Strict)?.decode(observed, hbar, codebook)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bhcode::build_bh_codebook;
    use crate::channel::{erase, ErasurePattern, Removal};
    use crate::codec::encode;
    use crate::composition::is_dyck;
    use itertools::Itertools;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn codebook() -> BhCodebook {
        build_bh_codebook(2, tables::spec(tables::BCH_255_239).unwrap()).unwrap()
    }

    #[test]
    fn integral_examples() {
        assert_eq!(integral(&bs("110100")), bs("100111"));
        assert_eq!(integral(&bs("0000")), bs("0000"));
        for (a, b) in (0..256u64).cartesian_product(0..256u64) {
            let (x, y) = (BitString::from_index(a, 8), BitString::from_index(b, 8));
            assert_eq!(integral(&x.xor(&y).unwrap()), integral(&x).xor(&integral(&y)).unwrap());
        }
    }

    #[test]
    fn redundancy_reads_out_checks() {
        for (last, checks) in [(0u8, vec![1u8, 0, 1]), (1, vec![0, 0]), (1, vec![1])] {
            let r = integral_redundancy(last, &checks);
            let running: Vec<u8> = running_parity(&r).iter().map(|b| b ^ last).collect();
            let odd: Vec<u8> = (0..checks.len()).map(|i| running[2 * i]).collect();
            assert_eq!(odd, checks);
            assert!(r.chunks(2).all(|p| p[0] != p[1]));
        }
    }

    #[test]
    fn uncoded_one_step_matches_plain_encoding() {
        let c = EccCodec::standard(Scheme::OneStep, 16, 0, 2).unwrap();
        let s = codebook().strings()[3].clone();
        assert_eq!(c.encode(&s).unwrap().bits, encode(&s, LeadRun::Strict).unwrap().bits);
    }

    #[test]
    fn codewords_are_dyck_and_lengths_match() {
        let cb = codebook();
        for scheme in [Scheme::OneStep, Scheme::TwoStep, Scheme::Integral, Scheme::Prime] {
            for t in 0..=2 {
                let c = EccCodec::standard(scheme, 16, t, 2).unwrap();
                for s in cb.strings().iter().take(20) {
                    let w = c.encode(s).unwrap();
                    assert_eq!(w.bits.len(), c.total_len());
                    assert!(is_dyck(&w.bits).unwrap(), "{scheme:?} t={t}");
                }
            }
        }
        let two = EccCodec::standard(Scheme::TwoStep, 16, 2, 2).unwrap();
        let m1 = two.geometry().padded_len();
        let q = two.geometry().block;
        let m3 = q + 4;
        assert_eq!(2 * two.total_len(), 2 * m1 + 17 * q + 4 * (m3 - q) + 4);
    }

    #[test]
    fn single_removals_decode_for_every_scheme() {
        let cb = codebook();
        let sources = vec![cb.strings()[5].clone(), cb.strings()[77].clone()];
        for scheme in [Scheme::OneStep, Scheme::TwoStep, Scheme::Integral, Scheme::Prime] {
            let c = EccCodec::standard(scheme, 16, 1, 2).unwrap();
            let clean = c.pool(&sources).unwrap();
            assert_eq!(c.decode(&clean, 2, &cb).unwrap(), sources);
            for len in (1..c.total_len()).step_by(7) {
                for side in [Side::Prefix, Side::Suffix] {
                    let p = ErasurePattern { removals: vec![Removal { side, len, count: 1, ones: None }] };
                    let damaged = erase(&clean, &p).unwrap();
                    assert_eq!(c.decode(&damaged, 2, &cb).unwrap(), sources, "{scheme:?} {side:?} {len}");
                }
            }
        }
    }

    #[test]
    fn capability_is_checked() {
        let weak = tables::code(tables::BCH_15_7).unwrap();
        assert!(matches!(EccCodec::one_step(1, weak, LeadRun::Strict), Err(Error::CapabilityTooSmall { .. })));
    }

    #[test]
    fn same_length_substitutions_are_corrected() {
        let cb = codebook();
        let sources = vec![cb.strings()[11].clone(), cb.strings()[200].clone()];
        let c = EccCodec::standard_substitution(1).unwrap();
        let clean = c.pool(&sources).unwrap();
        assert_eq!(c.decode_substitutions(&clean, 2, &cb).unwrap(), sources);
        let mut hit = 0;
        for (comp, _) in clean.iter().filter(|(c, _)| c.ones > 0).step_by(5) {
            let mut bad = clean.clone();
            bad.remove(&comp);
            bad.insert(crate::Composition::with_length(comp.len(), comp.ones - 1));
            assert_eq!(c.decode_substitutions(&bad, 2, &cb).unwrap(), sources, "{comp}");
            hit += 1;
        }
        assert!(hit > 10);
    }
}
