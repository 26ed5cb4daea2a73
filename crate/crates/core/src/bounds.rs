//! Rate bounds for B_h codes and for mixture codes.

use std::f64::consts::{E, PI};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Best known achievable rate of binary B_2 codes, used as the lower end of
/// the gap at `h = 2`.
pub const B2_RATE: f64 = 0.5753;

/// How the entropy of `Binomial(h, 1/2)` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMode {
    /// The defining sum.
    Exact,
    /// `½ log2(2πe h/4)`, the normal approximation.
    #[default]
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    NaiveBhUpper,
    BhUpperTight,
    McUpper,
    McLowerConstruction,
}

/// One bound on the rate in bits per symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub h: usize,
    pub kind: BoundKind,
    pub value: f64,
    pub entropy_mode: EntropyMode,
}

/// Entropy in bits of the number of ones in a sum of `h` fair bits.
pub fn binomial_entropy(h: usize, mode: EntropyMode) -> f64 {
    match mode {
        EntropyMode::Gaussian => 0.5 * (2.0 * PI * E * h as f64 / 4.0).log2(),
        EntropyMode::Exact => {
            // ln C(h, k) built up incrementally to avoid overflow.
            let mut ln_binom = 0.0f64;
            let ln2h = h as f64 * std::f64::consts::LN_2;
            let mut bits = 0.0;
            for k in 0..=h {
                if k > 0 {
                    ln_binom += ((h - k + 1) as f64).ln() - (k as f64).ln();
                }
                let ln_p = ln_binom - ln2h;
                bits -= ln_p.exp() * ln_p / std::f64::consts::LN_2;
            }
            bits
        }
    }
}

/// `H(h) / h`: each sum of `h` strings must be distinct.
pub fn naive_bh_upper(h: usize, mode: EntropyMode) -> f64 {
    binomial_entropy(h, mode) / h as f64
}

/// `(2/h) H(h/2) / (1 + H(h/2)/H(h))` for even `h`.
pub fn bh_upper_tight(h: usize, mode: EntropyMode) -> Result<f64> {
    if h == 0 || h % 2 == 1 {
        return Err(Error::OddH(h));
    }
    let (half, full) = (binomial_entropy(h / 2, mode), binomial_entropy(h, mode));
    Ok(2.0 / h as f64 * half / (1.0 + half / full))
}

/// Upper bound on the rate of h-MC codes: `(h+1)/(2h)` for odd `h`,
/// `1 - ½ · 1/(1 + 1/h)` for even `h`.
pub fn mc_upper(h: usize) -> Result<Ratio<u64>> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!("mixture bound needs h >= 2, got {h}")));
    }
    let h = h as u64;
    Ok(if h % 2 == 1 { Ratio::new(h + 1, 2 * h) } else { Ratio::new(h + 2, 2 * (h + 1)) })
}

/// Limit of [`mc_upper`] as `h` grows.
pub const MC_UPPER_LIMIT: f64 = 0.5;

/// Rate of the construction from B_h codes: `1/h`.
pub fn mc_lower_construction(h: usize) -> Ratio<u64> {
    Ratio::new(1, h.max(1) as u64)
}

pub fn ratio_value(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Rounds half to even at `digits` decimals.
pub fn round_half_even(x: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (x * scale).round_ties_even() / scale
}

/// Distance between the mixture upper bound and an achievable-side value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub h: usize,
    pub mc_upper: f64,
    pub reference: f64,
    pub gap: f64,
}

/// Gaps `mc_upper(h) - reference`, where the reference is [`B2_RATE`] at
/// `h = 2` and the naive B_h bound otherwise.
pub fn gap_table(hs: &[usize], mode: EntropyMode) -> Result<Vec<GapRow>> {
    hs.iter()
        .map(|&h| {
            let upper = ratio_value(mc_upper(h)?);
            let reference = if h == 2 { B2_RATE } else { naive_bh_upper(h, mode) };
            Ok(GapRow { h, mc_upper: upper, reference, gap: upper - reference })
        })
        .collect()
}

/// Every bound that applies at each `h`.
pub fn bounds_table(hs: &[usize], mode: EntropyMode) -> Result<Vec<RateBound>> {
    let mut out = Vec::new();
    for &h in hs {
        if h == 0 {
            return Err(Error::InvalidParameter("h must be positive".into()));
        }
        let mut push = |kind, value| out.push(RateBound { h, kind, value, entropy_mode: mode });
        push(BoundKind::NaiveBhUpper, naive_bh_upper(h, mode));
        if h % 2 == 0 {
            push(BoundKind::BhUpperTight, bh_upper_tight(h, mode)?);
        }
        if h >= 2 {
            push(BoundKind::McUpper, ratio_value(mc_upper(h)?));
        }
        push(BoundKind::McLowerConstruction, ratio_value(mc_lower_construction(h)));
    }
    Ok(out)
}

/// All bounds at one `h`, rounded half to even at four decimals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub h: usize,
    pub naive_bh_upper: f64,
    pub bh_upper_tight: Option<f64>,
    /// Exact fraction such as `3/5`.
    pub mc_upper: Option<String>,
    pub mc_lower: f64,
    pub gap: Option<f64>,
}

pub fn summary(hs: &[usize], mode: EntropyMode) -> Result<Vec<BoundsRow>> {
    hs.iter()
        .map(|&h| {
            if h == 0 {
                return Err(Error::InvalidParameter("h must be positive".into()));
            }
            let r4 = |x: f64| round_half_even(x, 4);
            let upper = mc_upper(h).ok();
            let gap = if h >= 2 { Some(r4(gap_table(&[h], mode)?[0].gap)) } else { None };
            Ok(BoundsRow {
                h,
                naive_bh_upper: r4(naive_bh_upper(h, mode)),
                bh_upper_tight: bh_upper_tight(h, mode).ok().map(r4),
                mc_upper: upper.map(|r| r.to_string()),
                mc_lower: r4(ratio_value(mc_lower_construction(h))),
                gap,
            })
        })
        .collect()
}
