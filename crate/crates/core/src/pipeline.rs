//! One entry point per codebook kind for batch tools: build from a JSON
//! config, encode, pool and decode with a structured verdict.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bhcode::{build_bh_codebook, BhCodebook, ParityCheckSpec};
use crate::bits::{real_sum, BitString};
use crate::channel::{detect_substitution, reconstruct_redundancy_free, DetectionReport, Merge};
use crate::codec::{decode_mixture, pool_sources, sources_from_sum, LeadRun, Layout, McCodebook};
use crate::composition::{pool, CompositionMultiset};
use crate::ecc::{EccCodec, Scheme, SchemeConfig};
use crate::error::{Error, Result};
use crate::oracle::brute_decode;
use crate::tables;

/// `{"h", one of "table" | "matrix" | "strings" | "words", "lead", "ecc"}`.
///
/// `table` names a shipped parity-check matrix, `matrix` holds one in text
/// form, `strings` lists a B_h codebook, and `words` lists channel strings
/// that are pooled as they are.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodebookConfig {
    #[serde(default = "default_h")]
    pub h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strings: Option<Vec<BitString>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<BitString>>,
    #[serde(default)]
    pub lead: LeadRun,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ecc: Option<SchemeConfig>,
}

fn default_h() -> usize {
    2
}

impl CodebookConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bad codebook config: {e}")))
    }
}

/// A codeword with its source and, for coded strings, its layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoded {
    pub source: BitString,
    pub bits: BitString,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decoded,
    Ambiguous,
}

/// Verdict of [`Decoder::decode`]; failures are errors instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strings: Vec<BitString>,
    /// Every set that explains the pool when it is ambiguous.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Vec<BitString>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionReport>,
}

impl DecodeReport {
    fn from_sets(mut sets: Vec<Vec<BitString>>, detection: Option<DetectionReport>) -> Result<Self> {
        for s in &mut sets {
            s.sort();
        }
        sets.sort();
        sets.dedup();
        match sets.len() {
            0 => Err(Error::DecodeFailure("no set of codewords explains the pool".into())),
            1 => Ok(Self { status: Status::Decoded, strings: sets.pop().expect("one set"), candidates: Vec::new(), detection }),
            _ => Ok(Self { status: Status::Ambiguous, strings: Vec::new(), candidates: sets, detection }),
        }
    }
}

/// A codebook ready for batch use.
#[derive(Clone, Debug)]
pub enum Decoder {
    Plain(McCodebook),
    Ecc { codec: EccCodec, bh: BhCodebook },
    Words { words: Vec<BitString>, h: usize },
}

fn bh_from(cfg: &CodebookConfig) -> Result<BhCodebook> {
    match (&cfg.table, &cfg.matrix, &cfg.strings) {
        (Some(name), None, None) => {
            let text = tables::by_name(name).ok_or_else(|| Error::InvalidParameter(format!("unknown table {name:?}")))?;
            build_bh_codebook(cfg.h, ParityCheckSpec::parse(text)?)
        }
        (None, Some(text), None) => build_bh_codebook(cfg.h, ParityCheckSpec::parse(text)?),
        (None, None, Some(strings)) => BhCodebook::explicit(strings.clone(), cfg.h),
        _ => Err(Error::InvalidParameter("give exactly one of table, matrix, strings or words".into())),
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b.max(1))
}

impl Decoder {
    pub fn from_config(cfg: &CodebookConfig) -> Result<Self> {
        if let Some(words) = &cfg.words {
            if cfg.table.is_some() || cfg.matrix.is_some() || cfg.strings.is_some() || cfg.ecc.is_some() {
                return Err(Error::InvalidParameter("words cannot be combined with a codebook".into()));
            }
            let n = words.first().ok_or(Error::EmptyString)?.len();
            if let Some(w) = words.iter().find(|w| w.len() != n) {
                return Err(Error::LengthMismatch { expected: n, found: w.len() });
            }
            return Ok(Self::Words { words: words.clone(), h: cfg.h });
        }
        let bh = bh_from(cfg)?;
        match &cfg.ecc {
            None => Ok(Self::Plain(McCodebook::new(bh, cfg.lead)?)),
            Some(scheme) => Ok(Self::Ecc { codec: EccCodec::from_config(scheme, bh.n())?, bh }),
        }
    }

    /// Length of every channel string.
    pub fn total_len(&self) -> usize {
        match self {
            Self::Plain(cb) => cb.total_len(),
            Self::Ecc { codec, .. } => codec.total_len(),
            Self::Words { words, .. } => words[0].len(),
        }
    }

    /// Channel strings of every source, in codebook order.
    pub fn universe(&self) -> Result<Vec<BitString>> {
        match self {
            Self::Plain(cb) => cb.codewords(),
            Self::Ecc { codec, bh } => bh.strings().iter().map(|s| codec.encode(s).map(|c| c.bits)).collect(),
            Self::Words { words, .. } => Ok(words.clone()),
        }
    }

    pub fn encode(&self, s: &BitString) -> Result<Encoded> {
        match self {
            Self::Plain(cb) => {
                let c = cb.encode(s)?;
                Ok(Encoded { source: c.source, bits: c.bits, scheme: None, layout: Some(c.layout) })
            }
            Self::Ecc { codec, bh } => {
                if bh.index_of(s).is_none() {
                    return Err(Error::InvalidParameter(format!("{s} is not in the codebook")));
                }
                let c = codec.encode(s)?;
                Ok(Encoded { source: c.source, bits: c.bits, scheme: Some(c.scheme), layout: Some(c.layout) })
            }
            Self::Words { words, .. } => {
                if !words.contains(s) {
                    return Err(Error::InvalidParameter(format!("{s} is not in the word list")));
                }
                Ok(Encoded { source: s.clone(), bits: s.clone(), scheme: None, layout: None })
            }
        }
    }

    pub fn pool(&self, sources: &[BitString]) -> Result<CompositionMultiset> {
        let words: Vec<BitString> = sources.iter().map(|s| self.encode(s).map(|e| e.bits)).collect::<Result<_>>()?;
        pool(&words)
    }

    /// Decodes a possibly damaged pool. `hbar` defaults to the smallest
    /// count that fits the pool size. With `substitution` the pool is read
    /// as having the full size but some altered compositions.
    pub fn decode(&self, observed: &CompositionMultiset, hbar: Option<usize>, substitution: bool, budget: u128) -> Result<DecodeReport> {
        if observed.is_empty() && hbar.unwrap_or(0) == 0 {
            return DecodeReport::from_sets(vec![Vec::new()], None);
        }
        let n_total = self.total_len();
        let hbar = hbar.unwrap_or_else(|| ceil_div(observed.len(), 2 * n_total));
        if observed.len() > 2 * n_total * hbar {
            return Err(Error::InconsistentPoolSize { size: observed.len(), codeword_len: n_total });
        }
        match self {
            Self::Plain(cb) => self.decode_plain(cb, observed, n_total, hbar, substitution),
            Self::Ecc { codec, bh } => {
                let found = if substitution { codec.decode_substitutions(observed, hbar, bh) } else { codec.decode(observed, hbar, bh) };
                match found {
                    Ok(strings) => DecodeReport::from_sets(vec![strings], None),
                    Err(Error::AmbiguousSolution(_)) => {
                        Ok(DecodeReport { status: Status::Ambiguous, strings: Vec::new(), candidates: Vec::new(), detection: None })
                    }
                    Err(e) => Err(e),
                }
            }
            Self::Words { words, .. } => {
                let full = 2 * n_total * hbar;
                if substitution && observed.len() == full {
                    let report = detect_substitution(observed, n_total, hbar);
                    if report.is_clean() {
                        return DecodeReport::from_sets(brute_decode(observed, words, hbar, 0, budget)?, Some(report));
                    }
                    let sets = report
                        .candidates
                        .iter()
                        .flat_map(|c| words.iter().cloned().combinations(hbar).filter(move |s| real_sum(s) == c.sum))
                        .collect();
                    return DecodeReport::from_sets(sets, Some(report));
                }
                let sets = brute_decode(observed, words, hbar, full - observed.len(), budget)?.into_iter().filter(|s| s.len() == hbar).collect();
                DecodeReport::from_sets(sets, None)
            }
        }
    }

    fn decode_plain(&self, cb: &McCodebook, observed: &CompositionMultiset, n_total: usize, hbar: usize, substitution: bool) -> Result<DecodeReport> {
        let full = observed.len() == 2 * n_total * hbar;
        if full {
            if let Ok(found) = decode_mixture(observed, cb) {
                return DecodeReport::from_sets(vec![found], None);
            }
        }
        let explains = |f: &Vec<BitString>| pool_sources(f, cb).map(|p| p.contains_all(observed)).unwrap_or(false);
        if substitution && full {
            let report = detect_substitution(observed, n_total, hbar);
            let sets = report.candidates.iter().filter_map(|c| sources_from_sum(&c.sum, hbar, cb).ok()).collect();
            return DecodeReport::from_sets(sets, Some(report));
        }
        let r = reconstruct_redundancy_free(observed, n_total, hbar, None)?;
        let sums = match r.outcome {
            Merge::Exact { sum } => vec![sum],
            Merge::Ambiguous { candidates, .. } => candidates,
        };
        let sets = sums.iter().filter_map(|s| sources_from_sum(s, hbar, cb).ok()).filter(explains).collect();
        DecodeReport::from_sets(sets, None)
    }
}
