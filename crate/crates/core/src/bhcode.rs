//! Binary B_h codebooks: sets of strings whose real-valued sums over any `<= h`
//! distinct members are all different.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits::{real_sum, BitString};
use crate::error::{Error, Result};
use crate::gf2::{distance_at_least, subsets_up_to, BinaryMatrix, DEFAULT_BUDGET};

/// A parity-check matrix with a checked minimum distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckSpec {
    matrix: BinaryMatrix,
    d: usize,
}

impl ParityCheckSpec {
    /// Accepts the matrix only if its code really has minimum distance `>= d`
    /// and its columns are distinct and nonzero.
    pub fn new(matrix: BinaryMatrix, d: usize) -> Result<Self> {
        if matrix.row_count() > 128 {
            return Err(Error::Unsupported("parity-check matrices with more than 128 rows".into()));
        }
        if !distance_at_least(&matrix, d.max(3), DEFAULT_BUDGET)? {
            return Err(Error::MalformedMatrix(format!(
                "code distance is below the declared d={d} or columns repeat or vanish"
            )));
        }
        Ok(Self { matrix, d })
    }

    /// Parses the `d=<int>` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let (matrix, d) = BinaryMatrix::parse_with_distance(text)?;
        Self::new(matrix, d)
    }

    pub fn to_text(&self) -> String {
        self.matrix.to_text(self.d)
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn designed_distance(&self) -> usize {
        self.d
    }

    /// Length of each codebook string (number of matrix rows).
    pub fn string_len(&self) -> usize {
        self.matrix.row_count()
    }

    /// Number of codebook strings (number of matrix columns).
    pub fn size(&self) -> usize {
        self.matrix.col_count()
    }
}

/// Where a codebook's strings came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    ParityCheck(ParityCheckSpec),
    Explicit,
}

/// An ordered list of distinct equal-length strings meant to be B_h.
#[derive(Clone, Debug)]
pub struct BhCodebook {
    h: usize,
    strings: Vec<BitString>,
    source: Source,
    syndromes: OnceLock<HashMap<u128, Vec<usize>>>,
}

/// The columns of `spec` as a B_h codebook; requires `d >= 2h + 1`.
pub fn build_bh_codebook(h: usize, spec: ParityCheckSpec) -> Result<BhCodebook> {
    let need = 2 * h + 1;
    if spec.d < need {
        return Err(Error::DistanceTooSmall { d: spec.d, h, need });
    }
    let strings = (0..spec.size()).map(|j| BitString::from_vec(spec.matrix.column(j))).collect();
    Ok(BhCodebook { h, strings, source: Source::ParityCheck(spec), syndromes: OnceLock::new() })
}

impl BhCodebook {
    /// Wraps a hand-picked list; the B_h property is not checked here (see [`verify_bh`]).
    pub fn explicit(strings: Vec<BitString>, h: usize) -> Result<Self> {
        let first = strings.first().ok_or(Error::EmptyString)?.len();
        let mut seen = HashSet::new();
        for s in &strings {
            if s.len() != first {
                return Err(Error::LengthMismatch { expected: first, found: s.len() });
            }
            if !seen.insert(s) {
                return Err(Error::DuplicateString(s.to_string()));
            }
        }
        Ok(Self { h, strings, source: Source::Explicit, syndromes: OnceLock::new() })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// String length.
    pub fn n(&self) -> usize {
        self.strings[0].len()
    }

    /// Number of strings.
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn index_of(&self, s: &BitString) -> Option<usize> {
        self.strings.iter().position(|c| c == s)
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn spec(&self) -> Option<&ParityCheckSpec> {
        match &self.source {
            Source::ParityCheck(spec) => Some(spec),
            Source::Explicit => None,
        }
    }

    pub fn rate(&self) -> f64 {
        codebook_rate(self.len(), self.n())
    }

    fn mask(s: &BitString) -> u128 {
        s.bits().iter().enumerate().fold(0, |acc, (i, &b)| acc | (u128::from(b) << i))
    }

    /// XOR of every subset of size `<= h`, keyed by value. Distinct subsets
    /// of that size have distinct XORs because `d >= 2h + 1`.
    fn syndrome_table(&self) -> Result<&HashMap<u128, Vec<usize>>> {
        if let Some(t) = self.syndromes.get() {
            return Ok(t);
        }
        let needed = subsets_up_to(self.len(), self.h);
        if needed > DEFAULT_BUDGET {
            return Err(Error::SearchSpaceTooLarge { needed, budget: DEFAULT_BUDGET });
        }
        let cols: Vec<u128> = self.strings.iter().map(Self::mask).collect();
        let mut table = HashMap::new();
        for size in 0..=self.h {
            for subset in (0..self.len()).combinations(size) {
                let x = subset.iter().fold(0u128, |acc, &j| acc ^ cols[j]);
                table.entry(x).or_insert(subset);
            }
        }
        Ok(self.syndromes.get_or_init(|| table))
    }
}

/// `log2(size) / len`.
pub fn codebook_rate(size: usize, len: usize) -> f64 {
    (size as f64).log2() / len as f64
}

/// Outcome of an exhaustive B_h check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verification {
    Valid,
    /// The first two subsets, in enumeration order, that share a real sum.
    Collision { first: Vec<BitString>, second: Vec<BitString>, sum: Vec<u32> },
}

/// Compares the real sums of all subsets of sizes `1..=h`, visiting sizes in
/// increasing order and subsets lexicographically.
pub fn verify_bh(strings: &[BitString], h: usize, budget: u128) -> Result<Verification> {
    let needed = subsets_up_to(strings.len(), h).saturating_sub(1);
    if needed > budget {
        return Err(Error::SearchSpaceTooLarge { needed, budget });
    }
    let mut seen: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for size in 1..=h.min(strings.len()) {
        for subset in (0..strings.len()).combinations(size) {
            let sum = real_sum(subset.iter().map(|&i| &strings[i]));
            if let Some(prev) = seen.get(&sum) {
                let pick = |idx: &[usize]| idx.iter().map(|&i| strings[i].clone()).collect();
                return Ok(Verification::Collision { first: pick(prev), second: pick(&subset), sum });
            }
            seen.insert(sum, subset);
        }
    }
    Ok(Verification::Valid)
}

/// How [`invert_sum`] searches for the subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertStrategy {
    /// Try all `C(|codebook|, hbar)` subsets, within the budget.
    Exhaustive { budget: u128 },
    /// Decode the mod-2 reduction against the parity-check matrix.
    Syndrome,
    /// Exhaustive when it fits the default budget, otherwise syndrome.
    Auto,
}

/// The unique subset of `hbar` codebook strings whose real sum is `target`.
pub fn invert_sum(codebook: &BhCodebook, target: &[u32], hbar: usize, strategy: InvertStrategy) -> Result<Vec<BitString>> {
    if target.len() != codebook.n() {
        return Err(Error::LengthMismatch { expected: codebook.n(), found: target.len() });
    }
    if hbar > codebook.h() {
        return Err(Error::InvalidParameter(format!("hbar={hbar} exceeds h={}", codebook.h())));
    }
    if hbar == 0 {
        return if target.iter().all(|&v| v == 0) { Ok(Vec::new()) } else { Err(Error::NoSolution) };
    }
    let exhaustive_cost = subsets_up_to(codebook.len(), hbar) - subsets_up_to(codebook.len(), hbar.saturating_sub(1));
    let strategy = match strategy {
        InvertStrategy::Auto if exhaustive_cost <= DEFAULT_BUDGET || codebook.spec().is_none() => {
            InvertStrategy::Exhaustive { budget: DEFAULT_BUDGET }
        }
        InvertStrategy::Auto => InvertStrategy::Syndrome,
        s => s,
    };
    match strategy {
        InvertStrategy::Exhaustive { budget } => {
            if exhaustive_cost > budget {
                return Err(Error::SearchSpaceTooLarge { needed: exhaustive_cost, budget });
            }
            let mut hits = (0..codebook.len())
                .combinations(hbar)
                .filter(|subset| real_sum(subset.iter().map(|&i| &codebook.strings[i])) == target);
            let first = hits.next().ok_or(Error::NoSolution)?;
            let extra = hits.count();
            if extra > 0 {
                return Err(Error::AmbiguousSolution(extra + 1));
            }
            Ok(first.iter().map(|&i| codebook.strings[i].clone()).collect())
        }
        _ => {
            let parity: Vec<u8> = target.iter().map(|&v| (v % 2) as u8).collect();
            let found = invert_parity(codebook, &parity, hbar)?;
            if real_sum(&found) != target {
                return Err(Error::NoSolution);
            }
            Ok(found)
        }
    }
}

/// The subset of `hbar` strings whose XOR is `parity`, found by syndrome
/// lookup. Needs a parity-check backed codebook.
pub fn invert_parity(codebook: &BhCodebook, parity: &[u8], hbar: usize) -> Result<Vec<BitString>> {
    if codebook.spec().is_none() {
        return Err(Error::Unsupported("mod-2 inversion needs a parity-check backed codebook".into()));
    }
    if parity.len() != codebook.n() {
        return Err(Error::LengthMismatch { expected: codebook.n(), found: parity.len() });
    }
    if hbar > codebook.h() {
        return Err(Error::InvalidParameter(format!("hbar={hbar} exceeds h={}", codebook.h())));
    }
    let key = parity.iter().enumerate().fold(0u128, |acc, (i, &b)| acc | (u128::from(b & 1) << i));
    let subset = codebook.syndrome_table()?.get(&key).ok_or(Error::NoSolution)?;
    if subset.len() != hbar {
        return Err(Error::NoSolution);
    }
    Ok(subset.iter().map(|&i| codebook.strings[i].clone()).collect())
}
