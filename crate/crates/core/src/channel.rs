//! Missing and mass-reducing composition errors, the erasure burst calculus
//! on partial sum strings, and recovery without added redundancy.

use std::collections::BTreeMap;
use std::ops::Range;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{real_sum, BitString};
use crate::composition::{pool, Composition, CompositionMultiset};
use crate::error::{Error, Result};
use crate::gf2::DEFAULT_BUDGET;
use crate::sums::{increments, side_totals, split_length, split_pool, to_partial, LengthSplit, PartialSumString, Side};

/// Removal of `count` compositions of one length from one side. `ones`
/// picks a specific composition; otherwise the side's compositions are
/// taken in ascending order of ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub side: Side,
    pub len: usize,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ones: Option<usize>,
}

/// One composition of the given side and length read with fewer ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub side: Side,
    pub len: usize,
    pub ones_from: usize,
    pub ones_to: usize,
}

/// A list of removals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasurePattern {
    pub removals: Vec<Removal>,
}

impl ErasurePattern {
    pub fn total(&self) -> usize {
        self.removals.iter().map(|r| r.count).sum()
    }

    pub fn on_side(&self, side: Side) -> usize {
        self.removals.iter().filter(|r| r.side == side).map(|r| r.count).sum()
    }
}

/// The pattern file: `{"erase": [...], "subst": [...]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionPattern {
    #[serde(default)]
    pub erase: Vec<Removal>,
    #[serde(default)]
    pub subst: Vec<Substitution>,
}

impl CorruptionPattern {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bad pattern: {e}")))
    }
}

/// String length and string count of a clean pool.
pub fn clean_dimensions(pool: &CompositionMultiset) -> Result<(usize, usize)> {
    let n_total = pool.max_len();
    if n_total == 0 {
        return Ok((0, 0));
    }
    if pool.len() % (2 * n_total) != 0 {
        return Err(Error::InconsistentPoolSize { size: pool.len(), codeword_len: n_total });
    }
    Ok((n_total, pool.len() / (2 * n_total)))
}

/// Removes the compositions named by `pattern` from a clean pool.
pub fn erase(pool: &CompositionMultiset, pattern: &ErasurePattern) -> Result<CompositionMultiset> {
    if pattern.removals.is_empty() {
        return Ok(pool.clone());
    }
    let (_, hbar) = clean_dimensions(pool)?;
    let mut sides: BTreeMap<(usize, Side), Vec<Composition>> = BTreeMap::new();
    let mut out = pool.clone();
    for r in &pattern.removals {
        let list = sides.entry((r.len, r.side)).or_insert_with(|| split_length(pool, r.len, hbar).side(r.side).to_vec());
        for _ in 0..r.count {
            let at = match r.ones {
                Some(ones) => list.iter().position(|c| c.ones == ones),
                None => (!list.is_empty()).then_some(0),
            };
            let at = at.ok_or_else(|| Error::PatternNotPresent(format!("{:?} composition of length {}", r.side, r.len)))?;
            out.remove(&list.remove(at));
        }
    }
    Ok(out)
}

/// Replaces one composition of `len` with `ones_from` ones by one with
/// `ones_to < ones_from` ones.
pub fn substitute_mass_reducing(pool: &CompositionMultiset, sub: &Substitution) -> Result<CompositionMultiset> {
    if sub.ones_to >= sub.ones_from {
        return Err(Error::NotMassReducing { from: sub.ones_from, to: sub.ones_to });
    }
    let victim = Composition::with_length(sub.len, sub.ones_from);
    let on_side = match sub.side {
        Side::Prefix => 2 * sub.ones_from >= sub.len,
        Side::Suffix => 2 * sub.ones_from <= sub.len,
    };
    let mut out = pool.clone();
    if sub.ones_from > sub.len || !on_side || !out.remove(&victim) {
        return Err(Error::PatternNotPresent(format!("{:?} composition {victim}", sub.side)));
    }
    out.insert(Composition::with_length(sub.len, sub.ones_to));
    Ok(out)
}

/// Applies the removals, then the substitutions.
pub fn corrupt(pool: &CompositionMultiset, pattern: &CorruptionPattern) -> Result<CompositionMultiset> {
    let mut out = erase(pool, &ErasurePattern { removals: pattern.erase.clone() })?;
    for sub in &pattern.subst {
        out = substitute_mass_reducing(&out, sub)?;
    }
    Ok(out)
}

/// Partial prefix-sum and suffix-sum strings, both in prefix orientation.
/// A length whose side cannot be filled to `hbar` erases the two sum
/// symbols on either side of it.
pub fn partial_sum_strings(pool: &CompositionMultiset, n_total: usize, hbar: usize) -> (PartialSumString, PartialSumString) {
    let splits = split_pool(pool, n_total, hbar);
    let prefix = to_partial(&increments(&side_totals(&splits, Side::Prefix, hbar)), hbar);
    let suffix = to_partial(&increments(&side_totals(&splits, Side::Suffix, hbar)), hbar).reversed();
    (prefix, suffix)
}

/// A maximal run of erased symbols; `start` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Burst {
    pub start: usize,
    pub len: usize,
}

impl Burst {
    fn range(self) -> Range<usize> {
        self.start..self.start + self.len
    }
}

/// Erasure bursts on each side and the lengths of their overlaps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurstReport {
    pub prefix: Vec<Burst>,
    pub suffix: Vec<Burst>,
    /// Number of positions shared by each intersecting pair of bursts.
    pub overlaps: Vec<usize>,
}

impl BurstReport {
    /// No overlap, or a single overlap of one position.
    pub fn within_redundancy_free_limit(&self) -> bool {
        self.overlaps.is_empty() || self.overlaps == [1]
    }
}

fn bursts(p: &PartialSumString) -> Vec<Burst> {
    let mut out: Vec<Burst> = Vec::new();
    for i in p.erased_positions() {
        match out.last_mut() {
            Some(b) if b.start + b.len == i + 1 => b.len += 1,
            _ => out.push(Burst { start: i + 1, len: 1 }),
        }
    }
    out
}

pub fn burst_report(p: &PartialSumString, s: &PartialSumString) -> BurstReport {
    let (prefix, suffix) = (bursts(p), bursts(s));
    let overlaps = prefix
        .iter()
        .cartesian_product(&suffix)
        .map(|(a, b)| {
            let (ra, rb) = (a.range(), b.range());
            ra.end.min(rb.end).saturating_sub(ra.start.max(rb.start))
        })
        .filter(|&l| l > 0)
        .collect();
    BurstReport { prefix, suffix, overlaps }
}

/// Outcome of merging the two partial sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Merge {
    Exact { sum: Vec<u32> },
    /// More than one completion fits; `candidates` is cut at a fixed limit
    /// when `truncated` is set.
    Ambiguous { merged: PartialSumString, candidates: Vec<Vec<u32>>, truncated: bool },
}

const CANDIDATE_LIMIT: usize = 64;

/// Symbols known on either side; disagreeing known symbols are a conflict.
fn overlay(p: &PartialSumString, s: &PartialSumString) -> Result<PartialSumString> {
    if p.len() != s.len() {
        return Err(Error::LengthMismatch { expected: p.len(), found: s.len() });
    }
    let merged = p
        .symbols()
        .iter()
        .zip(s.symbols())
        .enumerate()
        .map(|(i, pair)| match pair {
            (Some(a), Some(b)) if a != b => Err(Error::Conflict { position: i + 1, prefix: *a, suffix: *b }),
            (a, b) => Ok(a.or(*b)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartialSumString::new(merged))
}

/// Completions of `merged` with symbols in `0..=hbar` meeting every range
/// sum in `constraints`.
fn completions(merged: &PartialSumString, hbar: usize, constraints: &[(Range<usize>, i64)]) -> (Vec<Vec<u32>>, bool) {
    let erased = merged.erased_positions();
    let base: Vec<u32> = merged.symbols().iter().map(|v| v.unwrap_or(0)).collect();
    // For each constraint: remaining target and erased positions left in it.
    let mut need: Vec<i64> = constraints.iter().map(|(r, t)| t - base[r.clone()].iter().map(|&v| v as i64).sum::<i64>()).collect();
    let mut left: Vec<i64> = constraints.iter().map(|(r, _)| erased.iter().filter(|i| r.contains(i)).count() as i64).collect();
    let member: Vec<Vec<usize>> = erased.iter().map(|i| (0..constraints.len()).filter(|&c| constraints[c].0.contains(i)).collect()).collect();

    struct Search<'a> {
        erased: &'a [usize],
        member: &'a [Vec<usize>],
        hbar: i64,
        current: Vec<u32>,
        found: Vec<Vec<u32>>,
        nodes: u128,
        truncated: bool,
    }
    fn feasible(need: &[i64], left: &[i64], hbar: i64) -> bool {
        need.iter().zip(left).all(|(&n, &l)| n >= 0 && n <= l * hbar)
    }
    fn go(s: &mut Search, k: usize, need: &mut [i64], left: &mut [i64]) {
        if s.truncated {
            return;
        }
        s.nodes += 1;
        if s.found.len() >= CANDIDATE_LIMIT || s.nodes > DEFAULT_BUDGET {
            s.truncated = true;
            return;
        }
        if k == s.erased.len() {
            if need.iter().all(|&n| n == 0) {
                s.found.push(s.current.clone());
            }
            return;
        }
        for v in 0..=s.hbar {
            for &c in &s.member[k] {
                need[c] -= v;
                left[c] -= 1;
            }
            if feasible(need, left, s.hbar) {
                s.current[s.erased[k]] = v as u32;
                go(s, k + 1, need, left);
            }
            for &c in &s.member[k] {
                need[c] += v;
                left[c] += 1;
            }
        }
    }
    if !feasible(&need, &left, hbar as i64) {
        return (Vec::new(), false);
    }
    let mut s = Search { erased: &erased, member: &member, hbar: hbar as i64, current: base, found: Vec::new(), nodes: 0, truncated: false };
    go(&mut s, 0, &mut need, &mut left);
    (s.found, s.truncated)
}

fn settle(merged: PartialSumString, hbar: usize, constraints: &[(Range<usize>, i64)]) -> Result<Merge> {
    let (candidates, truncated) = completions(&merged, hbar, constraints);
    match candidates.len() {
        0 if !truncated => Err(Error::NoSolution),
        1 if !truncated => Ok(Merge::Exact { sum: candidates.into_iter().next().expect("one candidate") }),
        _ => Ok(Merge::Ambiguous { merged, candidates, truncated }),
    }
}

/// Merges a partial prefix-sum and a reversed partial suffix-sum of `hbar`
/// strings with total weight `weight`. Leftover erasures are filled when
/// exactly one completion with symbols in `0..=hbar` has that weight.
pub fn merge_partials(p: &PartialSumString, s: &PartialSumString, hbar: usize, weight: usize) -> Result<Merge> {
    let merged = overlay(p, s)?;
    settle(merged, hbar, &[(0..p.len(), weight as i64)])
}

/// Range-sum constraints from the known totals of one side, in prefix
/// orientation: between consecutive known totals the erased symbols carry
/// their difference.
fn side_constraints(totals: &[Option<i64>], side: Side) -> Vec<(Range<usize>, i64)> {
    let n_total = totals.len() - 1;
    let known: Vec<(usize, i64)> = totals.iter().enumerate().filter_map(|(i, t)| t.map(|t| (i, t))).collect();
    known
        .windows(2)
        .filter(|w| w[1].0 > w[0].0 + 1)
        .map(|w| {
            let range = match side {
                Side::Prefix => w[0].0..w[1].0,
                Side::Suffix => n_total - w[1].0..n_total - w[0].0,
            };
            (range, w[1].1 - w[0].1)
        })
        .collect()
}

/// Result of recovery without redundancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub prefix: PartialSumString,
    pub suffix: PartialSumString,
    pub bursts: BurstReport,
    pub outcome: Merge,
    /// Subsets of the supplied universe consistent with the pool, when one
    /// was given. On an exact outcome only those with the recovered sum.
    pub witnesses: Vec<Vec<BitString>>,
}

impl Reconstruction {
    pub fn sum(&self) -> Option<&[u32]> {
        match &self.outcome {
            Merge::Exact { sum } => Some(sum),
            Merge::Ambiguous { .. } => None,
        }
    }
}

/// Subsets of `universe` of size `hbar` whose pool contains `erased` and
/// exceeds it by exactly `removals` compositions.
pub fn consistent_subsets(erased: &CompositionMultiset, universe: &[BitString], hbar: usize, removals: usize) -> Result<Vec<Vec<BitString>>> {
    let mut out = Vec::new();
    for subset in (0..universe.len()).combinations(hbar) {
        let chosen: Vec<BitString> = subset.iter().map(|&i| universe[i].clone()).collect();
        let full = pool(&chosen)?;
        if full.len() == erased.len() + removals && full.contains_all(erased) {
            out.push(chosen);
        }
    }
    Ok(out)
}

/// Recovers the real sum of `hbar` Dyck strings of length `n_total` from a
/// pool with missing compositions, using both sides, the range sums fixed
/// by known totals and the total weight `hbar * n_total / 2`.
pub fn reconstruct_redundancy_free(
    erased: &CompositionMultiset,
    n_total: usize,
    hbar: usize,
    universe: Option<&[BitString]>,
) -> Result<Reconstruction> {
    let splits = split_pool(erased, n_total, hbar);
    let totals_p = side_totals(&splits, Side::Prefix, hbar);
    let totals_s = side_totals(&splits, Side::Suffix, hbar);
    let prefix = to_partial(&increments(&totals_p), hbar);
    let suffix = to_partial(&increments(&totals_s), hbar).reversed();
    let bursts = burst_report(&prefix, &suffix);
    let mut constraints = vec![(0..n_total, (hbar * n_total / 2) as i64)];
    constraints.extend(side_constraints(&totals_p, Side::Prefix));
    constraints.extend(side_constraints(&totals_s, Side::Suffix));
    let outcome = settle(overlay(&prefix, &suffix)?, hbar, &constraints)?;
    let mut witnesses = match universe {
        Some(u) => consistent_subsets(erased, u, hbar, (2 * n_total * hbar).saturating_sub(erased.len()))?,
        None => Vec::new(),
    };
    if let Merge::Exact { sum } = &outcome {
        witnesses.retain(|w| &real_sum(w) == sum);
    }
    Ok(Reconstruction { prefix, suffix, bursts, outcome, witnesses })
}

/// A symbol outside `0..=hbar` read naively from one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncrementFlag {
    pub side: Side,
    /// 1-based, in prefix orientation.
    pub position: usize,
    pub value: i64,
}

/// A length whose compositions do not split into `hbar` per side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountAnomaly {
    pub len: usize,
    pub prefixes: usize,
    pub suffixes: usize,
    pub ties: usize,
    pub expected: usize,
}

/// A single corrected composition that makes the pool fully consistent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub observed: Composition,
    pub corrected: Composition,
    pub sum: Vec<u32>,
}

/// Signals of composition errors found in a pool.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub out_of_range: Vec<IncrementFlag>,
    pub count_anomalies: Vec<CountAnomaly>,
    /// Lengths `i` where the prefix ones of length `i` do not mirror the
    /// suffix ones of length `N - i`.
    pub incompatible_lengths: Vec<usize>,
    /// Sum read from one side when that side is complete and in range.
    pub prefix_sum: Option<Vec<u32>>,
    pub suffix_sum: Option<Vec<u32>>,
    pub candidates: Vec<Correction>,
}

impl DetectionReport {
    pub fn is_clean(&self) -> bool {
        self.out_of_range.is_empty() && self.count_anomalies.is_empty() && self.incompatible_lengths.is_empty()
    }
}

fn naive_increments(splits: &[LengthSplit], side: Side, hbar: usize) -> Vec<i64> {
    let n_total = splits.len();
    let mut totals: Vec<i64> = std::iter::once(0).chain(splits.iter().map(|s| s.ones(side) as i64)).collect();
    totals[n_total] = (hbar * n_total / 2) as i64;
    let mut incs: Vec<i64> = totals.windows(2).map(|w| w[1] - w[0]).collect();
    if side == Side::Suffix {
        incs.reverse();
    }
    incs
}

fn side_sum(splits: &[LengthSplit], incs: &[i64], side: Side, hbar: usize) -> Option<Vec<u32>> {
    let complete = splits.iter().all(|s| s.complete(side));
    let in_range = incs.iter().all(|&v| (0..=hbar as i64).contains(&v));
    (complete && in_range).then(|| incs.iter().map(|&v| v as u32).collect())
}

fn incompatible_lengths(splits: &[LengthSplit], n_total: usize) -> Vec<usize> {
    let half = n_total / 2;
    (1..n_total)
        .filter(|&i| {
            let pre: Vec<usize> = splits[i - 1].prefix.iter().map(|c| c.ones).sorted().collect();
            let mirror: Vec<usize> = splits[n_total - i - 1].suffix.iter().map(|c| half.saturating_sub(c.ones)).sorted().collect();
            pre != mirror
        })
        .collect()
}

struct Scan {
    report: DetectionReport,
    consistent: bool,
}

fn scan(pool: &CompositionMultiset, n_total: usize, hbar: usize) -> Scan {
    let splits = split_pool(pool, n_total, hbar);
    let mut report = DetectionReport::default();
    for (i, s) in splits.iter().enumerate() {
        if !(s.prefix_complete && s.suffix_complete) || s.surplus {
            let len = i + 1;
            let ties = pool.at_length(len).iter().filter(|(c, _)| 2 * c.ones == len).map(|(_, m)| m).sum();
            let prefixes = pool.at_length(len).iter().filter(|(c, _)| 2 * c.ones > len).map(|(_, m)| m).sum();
            let suffixes = pool.at_length(len).iter().filter(|(c, _)| 2 * c.ones < len).map(|(_, m)| m).sum();
            report.count_anomalies.push(CountAnomaly { len, prefixes, suffixes, ties, expected: hbar });
        }
    }
    for side in [Side::Prefix, Side::Suffix] {
        let incs = naive_increments(&splits, side, hbar);
        for (i, &v) in incs.iter().enumerate() {
            if !(0..=hbar as i64).contains(&v) {
                report.out_of_range.push(IncrementFlag { side, position: i + 1, value: v });
            }
        }
        let sum = side_sum(&splits, &incs, side, hbar);
        match side {
            Side::Prefix => report.prefix_sum = sum,
            Side::Suffix => report.suffix_sum = sum,
        }
    }
    report.incompatible_lengths = incompatible_lengths(&splits, n_total);
    let consistent = report.is_clean() && report.prefix_sum.is_some() && report.prefix_sum == report.suffix_sum;
    Scan { report, consistent }
}

/// Flags out-of-range symbols, count anomalies and prefix/suffix
/// mismatches, and lists every single mass-increasing correction of one
/// composition that leaves a fully consistent pool.
pub fn detect_substitution(pool: &CompositionMultiset, n_total: usize, hbar: usize) -> DetectionReport {
    let Scan { mut report, consistent } = scan(pool, n_total, hbar);
    if consistent {
        return report;
    }
    for (c, _) in pool.iter() {
        for ones in c.ones + 1..=c.len() {
            let corrected = Composition::with_length(c.len(), ones);
            let mut trial = pool.clone();
            trial.remove(&c);
            trial.insert(corrected);
            let s = scan(&trial, n_total, hbar);
            if s.consistent {
                let sum = s.report.prefix_sum.expect("consistent scans carry a sum");
                report.candidates.push(Correction { observed: c, corrected, sum });
            }
        }
    }
    report
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Patterns of `t` missing compositions of one string fixed by reading each
/// missing prefix from the matching suffix: `sum_i C(n,i) C(n-i,t-i)`.
pub fn count_correctable_single(n: usize, t: usize) -> u128 {
    (0..=t.min(n)).map(|i| binomial(n, i) * binomial(n - i, t - i)).sum()
}

/// The mixture analogue: `sum_j C(n,j) C(t-1,t-j) 2^j`, with one empty
/// pattern at `t = 0`.
pub fn count_correctable_multi(n: usize, t: usize) -> u128 {
    if t == 0 {
        return 1;
    }
    (1..=t).map(|j| binomial(n, j) * binomial(t - 1, t - j) << j).sum()
}

/// Where random removals land.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Uniformly among all compositions of the pool.
    #[default]
    Uniform,
    /// Prefixes of length `i` paired with suffixes of length `N - i`, so the
    /// bursts of both sides land on the same positions.
    Adversarial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Exact,
    Ambiguous,
    Conflict,
    /// A recovered sum that differs from the truth.
    Wrong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub hbar: usize,
    pub t: usize,
    #[serde(default)]
    pub placement: Placement,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub hbar: usize,
    pub t: usize,
    pub placement: Placement,
    pub outcome: Outcome,
}

fn labelled(pool: &CompositionMultiset, n_total: usize, hbar: usize) -> Vec<(Side, usize, usize)> {
    split_pool(pool, n_total, hbar)
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            let pre = s.prefix.iter().map(move |c| (Side::Prefix, i + 1, c.ones));
            let suf = s.suffix.iter().map(move |c| (Side::Suffix, i + 1, c.ones));
            pre.chain(suf).collect::<Vec<_>>()
        })
        .collect()
}

fn random_pattern(rng: &mut ChaCha8Rng, pool: &CompositionMultiset, n_total: usize, hbar: usize, t: usize, placement: Placement) -> ErasurePattern {
    let entries = labelled(pool, n_total, hbar);
    let removals = match placement {
        Placement::Uniform => sample(rng, entries.len(), t.min(entries.len()))
            .into_iter()
            .map(|k| {
                let (side, len, ones) = entries[k];
                Removal { side, len, count: 1, ones: Some(ones) }
            })
            .collect(),
        Placement::Adversarial => {
            let mut out: Vec<Removal> = Vec::new();
            let mut i = rng.gen_range(1..n_total.max(2));
            let mut used = 0;
            while out.len() < t && i < n_total {
                let (side, len) = if out.len() % 2 == 0 { (Side::Prefix, i) } else { (Side::Suffix, n_total - i) };
                out.push(Removal { side, len, count: 1, ones: None });
                if out.len() % 2 == 0 {
                    used += 1;
                    if used == hbar {
                        used = 0;
                        i += 1;
                    }
                }
            }
            out
        }
    };
    ErasurePattern { removals }
}

/// Runs seeded erasure trials over random `hbar`-subsets of `universe`
/// (Dyck strings of equal length). Trial `k` uses seed `config.seed + k`.
pub fn erasure_experiment(config: &ExperimentConfig, universe: &[BitString]) -> Result<Vec<TrialRecord>> {
    let n_total = universe.first().ok_or(Error::EmptyString)?.len();
    if config.hbar == 0 || config.hbar > universe.len() {
        return Err(Error::InvalidParameter(format!("cannot pick {} of {} strings", config.hbar, universe.len())));
    }
    (0..config.trials as u64)
        .map(|k| {
            let seed = config.seed.wrapping_add(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chosen: Vec<BitString> = sample(&mut rng, universe.len(), config.hbar).into_iter().map(|i| universe[i].clone()).collect();
            let clean = pool(&chosen)?;
            let pattern = random_pattern(&mut rng, &clean, n_total, config.hbar, config.t, config.placement);
            let damaged = erase(&clean, &pattern)?;
            let outcome = match reconstruct_redundancy_free(&damaged, n_total, config.hbar, None) {
                Ok(r) => match r.sum() {
                    Some(sum) if sum == real_sum(&chosen) => Outcome::Exact,
                    Some(_) => Outcome::Wrong,
                    None => Outcome::Ambiguous,
                },
                Err(Error::Conflict { .. } | Error::NoSolution) => Outcome::Conflict,
                Err(e) => return Err(e),
            };
            Ok(TrialRecord { seed, n: n_total, hbar: config.hbar, t: pattern.total(), placement: config.placement, outcome })
        })
        .collect()
}
