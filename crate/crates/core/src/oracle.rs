//! Brute-force ground truth for the constructive parts of the crate.

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::composition::{full_multiset, prefix_multiset, CompositionMultiset};
use crate::error::{Error, Result};
use crate::gf2::subsets_up_to;

/// Which fragments of each string are pooled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    /// All prefixes and suffixes.
    #[default]
    Full,
    /// Prefixes only.
    Prefix,
}

/// Outcome of an exhaustive uniqueness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HmcVerdict {
    Valid,
    /// The first two subsets, in enumeration order, with equal pools.
    Witness { first: Vec<BitString>, second: Vec<BitString> },
}

fn readout(strings: &[&BitString], kind: Readout) -> CompositionMultiset {
    let mut out = CompositionMultiset::new();
    for s in strings {
        out.extend_from(&match kind {
            Readout::Full => full_multiset(s),
            Readout::Prefix => prefix_multiset(s),
        });
    }
    out
}

/// Checks that the pools of all subsets of sizes `1..=h` are distinct.
pub fn verify_hmc(codebook: &[BitString], h: usize, kind: Readout, budget: u128) -> Result<HmcVerdict> {
    let needed = subsets_up_to(codebook.len(), h).saturating_sub(1);
    if needed > budget {
        return Err(Error::SearchSpaceTooLarge { needed, budget });
    }
    let mut seen: HashMap<CompositionMultiset, Vec<usize>> = HashMap::new();
    for size in 1..=h.min(codebook.len()) {
        for subset in (0..codebook.len()).combinations(size) {
            let p = readout(&subset.iter().map(|&i| &codebook[i]).collect::<Vec<_>>(), kind);
            if let Some(prev) = seen.get(&p) {
                let pick = |idx: &[usize]| idx.iter().map(|&i| codebook[i].clone()).collect();
                return Ok(HmcVerdict::Witness { first: pick(prev), second: pick(&subset) });
            }
            seen.insert(p, subset);
        }
    }
    Ok(HmcVerdict::Valid)
}

/// Every subset of at most `h` strings of `words` whose pool, after
/// `removals` compositions are dropped, can equal `observed`. With no
/// removals this is plain equality; the list has one entry exactly when the
/// pool is uniquely decodable.
pub fn brute_decode(
    observed: &CompositionMultiset,
    words: &[BitString],
    h: usize,
    removals: usize,
    budget: u128,
) -> Result<Vec<Vec<BitString>>> {
    let needed = subsets_up_to(words.len(), h);
    if needed > budget {
        return Err(Error::SearchSpaceTooLarge { needed, budget });
    }
    let mut out = Vec::new();
    for size in 0..=h.min(words.len()) {
        for subset in (0..words.len()).combinations(size) {
            let chosen: Vec<&BitString> = subset.iter().map(|&i| &words[i]).collect();
            let full = readout(&chosen, Readout::Full);
            if full.len() == observed.len() + removals && full.contains_all(observed) {
                out.push(chosen.into_iter().cloned().collect());
            }
        }
    }
    Ok(out)
}

/// How [`exhaustive_bh_search`] explores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Add strings in lexicographic order whenever the set stays B_h.
    MaxGreedy,
    /// Branch and bound for a largest B_h set.
    ExactMax,
}

/// Real sums of all subsets of sizes `1..=h`, grown one string at a time.
#[derive(Clone, Default)]
struct SumTable {
    /// Sums by subset size; index 0 holds the empty sum.
    by_size: Vec<Vec<Vec<u32>>>,
    all: HashSet<Vec<u32>>,
}

impl SumTable {
    fn new(n: usize, h: usize) -> Self {
        let mut by_size = vec![Vec::new(); h + 1];
        by_size[0].push(vec![0; n]);
        Self { by_size, all: HashSet::new() }
    }

    /// New sums created by adding `s`, or `None` on a collision.
    fn try_add(&self, s: &BitString) -> Option<Vec<(usize, Vec<u32>)>> {
        let h = self.by_size.len() - 1;
        let mut fresh: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut local = HashSet::new();
        for size in 0..h {
            for base in &self.by_size[size] {
                let sum: Vec<u32> = base.iter().zip(s.bits()).map(|(a, &b)| a + u32::from(b)).collect();
                if self.all.contains(&sum) || !local.insert(sum.clone()) {
                    return None;
                }
                fresh.push((size + 1, sum));
            }
        }
        Some(fresh)
    }

    fn commit(&mut self, fresh: Vec<(usize, Vec<u32>)>) {
        for (size, sum) in fresh {
            self.all.insert(sum.clone());
            self.by_size[size].push(sum);
        }
    }
}

/// Extends `seed` greedily by `candidates`, in order, keeping the set B_h.
pub fn greedy_extend(seed: &[BitString], candidates: &[BitString], h: usize) -> Result<Vec<BitString>> {
    let Some(n) = seed.first().or(candidates.first()).map(BitString::len) else { return Ok(Vec::new()) };
    let mut table = SumTable::new(n, h);
    let mut out = Vec::new();
    for s in seed {
        let fresh = table.try_add(s).ok_or_else(|| Error::InvalidParameter("seed is not a B_h set".into()))?;
        table.commit(fresh);
        out.push(s.clone());
    }
    for s in candidates {
        if s.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: s.len() });
        }
        if out.contains(s) {
            continue;
        }
        if let Some(fresh) = table.try_add(s) {
            table.commit(fresh);
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// A maximal (greedy) or maximum (exact) B_h set of length-`n` strings.
/// `budget` bounds the number of search nodes.
pub fn exhaustive_bh_search(n: usize, h: usize, mode: SearchMode, budget: u128) -> Result<Vec<BitString>> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidParameter(format!("string length {n} is outside 1..=20")));
    }
    let all: Vec<BitString> = (0..1u64 << n).map(|v| BitString::from_index(v, n)).collect();
    match mode {
        SearchMode::MaxGreedy => greedy_extend(&[], &all, h),
        SearchMode::ExactMax => {
            let mut search = Exact { all: &all, best: Vec::new(), chosen: Vec::new(), nodes: 0, budget };
            search.run(0, SumTable::new(n, h))?;
            Ok(search.best)
        }
    }
}

struct Exact<'a> {
    all: &'a [BitString],
    best: Vec<BitString>,
    chosen: Vec<BitString>,
    nodes: u128,
    budget: u128,
}

impl Exact<'_> {
    fn run(&mut self, next: usize, table: SumTable) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchSpaceTooLarge { needed: self.nodes, budget: self.budget });
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for i in next..self.all.len() {
            if self.chosen.len() + (self.all.len() - i) <= self.best.len() {
                break;
            }
            if let Some(fresh) = table.try_add(&self.all[i]) {
                let mut grown = table.clone();
                grown.commit(fresh);
                self.chosen.push(self.all[i].clone());
                self.run(i + 1, grown)?;
                self.chosen.pop();
            }
        }
        Ok(())
    }
}

/// Result of the cycle search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CycleReport {
    Free,
    /// Codewords on the cycle, one per edge, in cycle order.
    Cycle { weight: usize, strings: Vec<BitString> },
}

/// Splits every codeword as `a b` with `|a| = split` and, for each weight
/// `w`, joins the prefixes `a` of weight `w` to the suffixes `b` they occur
/// with. A cycle of length `cycle_len` in one of these bipartite graphs
/// gives two subsets with equal prefix pools.
pub fn check_prefix_code_cycles(codebook: &[BitString], split: usize, cycle_len: usize) -> Result<CycleReport> {
    if cycle_len < 4 || cycle_len % 2 == 1 {
        return Err(Error::InvalidParameter(format!("cycle length {cycle_len} must be even and at least 4")));
    }
    let mut strata: BTreeMap<usize, Vec<(BitString, BitString)>> = BTreeMap::new();
    for s in codebook {
        if split == 0 || split >= s.len() {
            return Err(Error::InvalidParameter(format!("split {split} must fall inside length {}", s.len())));
        }
        let a = s.slice(0, split);
        strata.entry(a.weight()).or_default().push((a, s.slice(split, s.len())));
    }
    for (weight, edges) in strata {
        if let Some(cycle) = find_cycle(&edges, cycle_len) {
            let strings = cycle.into_iter().map(|e| edges[e].0.concat(&edges[e].1)).collect();
            return Ok(CycleReport::Cycle { weight, strings });
        }
    }
    Ok(CycleReport::Free)
}

/// Edge indices of a simple cycle with `len` edges, searched from each
/// left vertex in order.
fn find_cycle(edges: &[(BitString, BitString)], len: usize) -> Option<Vec<usize>> {
    let lefts: Vec<&BitString> = edges.iter().map(|e| &e.0).unique().sorted().collect();
    let rights: Vec<&BitString> = edges.iter().map(|e| &e.1).unique().sorted().collect();
    let left_of = |s: &BitString| lefts.binary_search(&s).expect("present");
    let right_of = |s: &BitString| rights.binary_search(&s).expect("present");
    // Vertex ids: lefts first, then rights.
    let nl = lefts.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl + rights.len()];
    for (e, (a, b)) in edges.iter().enumerate() {
        let (u, v) = (left_of(a), nl + right_of(b));
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    for start in 0..nl {
        let mut path = Vec::new();
        let mut on_path = vec![false; adj.len()];
        on_path[start] = true;
        if extend_cycle(&adj, start, start, len, &mut path, &mut on_path) {
            return Some(path);
        }
    }
    None
}

fn extend_cycle(adj: &[Vec<(usize, usize)>], start: usize, at: usize, len: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    for &(next, e) in &adj[at] {
        if path.len() + 1 == len {
            if next == start && !path.contains(&e) {
                path.push(e);
                return true;
            }
            continue;
        }
        // Only vertices after the start keep each cycle found once.
        if on_path[next] || next < start {
            continue;
        }
        on_path[next] = true;
        path.push(e);
        if extend_cycle(adj, start, next, len, path, on_path) {
            return true;
        }
        path.pop();
        on_path[next] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bhcode::{verify_bh, Verification};
    use crate::composition::pool;
    use crate::gf2::DEFAULT_BUDGET;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn list(items: &[&str]) -> Vec<BitString> {
        items.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn equal_sums_with_distinct_pools() {
        let (a, b) = (pool(&list(&["011", "000"])).unwrap(), pool(&list(&["001", "010"])).unwrap());
        assert_ne!(a, b);
        let c = "0 1^2".parse().unwrap();
        assert!(a.count(&c) > 0 && b.count(&c) == 0);
        assert_eq!(verify_hmc(&list(&["011", "000", "001", "010"]), 2, Readout::Full, DEFAULT_BUDGET).unwrap(), HmcVerdict::Valid);
        assert!(matches!(verify_bh(&list(&["011", "000", "001", "010"]), 2, DEFAULT_BUDGET).unwrap(), Verification::Collision { .. }));
        assert_eq!(verify_hmc(&list(&["0110"]), 2, Readout::Full, DEFAULT_BUDGET).unwrap(), HmcVerdict::Valid);
    }

    #[test]
    fn mirrored_strings_share_pools() {
        let v = verify_hmc(&list(&["0011", "1100", "0101"]), 1, Readout::Full, DEFAULT_BUDGET).unwrap();
        assert!(matches!(v, HmcVerdict::Witness { .. }));
    }

    #[test]
    fn greedy_search_follows_candidate_order() {
        let seed = list(&["110100", "101010"]);
        let got = greedy_extend(&seed, &list(&["110010", "101100"]), 2).unwrap();
        assert_eq!(got, list(&["110100", "101010", "110010"]));
        assert_eq!(exhaustive_bh_search(1, 1, SearchMode::MaxGreedy, DEFAULT_BUDGET).unwrap(), list(&["0", "1"]));
    }

    #[test]
    fn exact_search_beats_or_matches_greedy() {
        for n in 2..=4 {
            let greedy = exhaustive_bh_search(n, 2, SearchMode::MaxGreedy, DEFAULT_BUDGET).unwrap();
            let exact = exhaustive_bh_search(n, 2, SearchMode::ExactMax, DEFAULT_BUDGET).unwrap();
            assert!(exact.len() >= greedy.len());
            assert_eq!(verify_bh(&exact, 2, DEFAULT_BUDGET).unwrap(), Verification::Valid);
            for extra in (0..1u64 << n).map(|v| BitString::from_index(v, n)).filter(|s| !exact.contains(s)) {
                let mut bigger = exact.clone();
                bigger.push(extra);
                assert!(matches!(verify_bh(&bigger, 2, DEFAULT_BUDGET).unwrap(), Verification::Collision { .. }));
            }
        }
        assert!(matches!(exhaustive_bh_search(4, 2, SearchMode::ExactMax, 3), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn brute_decode_lists_all_explanations() {
        let words = list(&["111000", "110100", "101010"]);
        assert_eq!(brute_decode(&CompositionMultiset::new(), &words, 2, 0, DEFAULT_BUDGET).unwrap(), vec![Vec::<BitString>::new()]);
        let clean = pool(&words[..2]).unwrap();
        assert_eq!(brute_decode(&clean, &words, 2, 0, DEFAULT_BUDGET).unwrap(), vec![words[..2].to_vec()]);
        let erased: CompositionMultiset = ["1", "1^2", "0 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1", "0^2", "0"]
            .iter()
            .map(|t| t.parse::<crate::Composition>().unwrap())
            .collect();
        let found = brute_decode(&erased, &words, 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(found, vec![list(&["111000"]), list(&["110100"])]);
    }

    #[test]
    fn planted_four_cycle_is_found() {
        let c = list(&["1000", "0111", "1011", "0100"]);
        match check_prefix_code_cycles(&c, 2, 4).unwrap() {
            CycleReport::Cycle { weight, mut strings } => {
                assert_eq!(weight, 1);
                strings.sort();
                let mut want = c.clone();
                want.sort();
                assert_eq!(strings, want);
            }
            CycleReport::Free => panic!("cycle missed"),
        }
        assert!(matches!(verify_hmc(&c, 2, Readout::Prefix, DEFAULT_BUDGET).unwrap(), HmcVerdict::Witness { .. }));
        assert_eq!(check_prefix_code_cycles(&list(&["0000", "1011", "1100"]), 2, 4).unwrap(), CycleReport::Free);
    }
}
