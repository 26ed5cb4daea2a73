//! Binary matrices, minimum-distance checks, and systematic linear codes.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on enumeration steps for distance checks and searches.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// A dense 0/1 matrix stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: Vec<Vec<u8>>,
}

impl BinaryMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::MalformedMatrix("matrix is empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::MalformedMatrix(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::MalformedMatrix(format!("row {} has a non-binary entry", i + 1)));
            }
        }
        Ok(Self { rows })
    }

    /// Parses a `d=<int>` header followed by one row of 0/1 characters per line.
    pub fn parse_with_distance(text: &str) -> Result<(Self, usize)> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::MalformedMatrix("missing d=<int> header".into()))?;
        let d = header
            .strip_prefix("d=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::MalformedMatrix(format!("bad header {header:?}")))?;
        let rows = lines
            .map(|l| {
                l.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::MalformedMatrix(format!("unexpected character {other:?}"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((Self::new(rows)?, d))
    }

    pub fn to_text(&self, d: usize) -> String {
        let mut out = format!("d={d}\n");
        for row in &self.rows {
            out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Column `j` packed into an integer, first row in the lowest bit.
    pub fn column_mask(&self, j: usize) -> u128 {
        self.rows.iter().enumerate().fold(0, |acc, (i, r)| acc | (u128::from(r[j]) << i))
    }

    /// `H x` over GF(2).
    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        self.rows.iter().map(|r| r.iter().zip(x).fold(0, |acc, (a, b)| acc ^ (a & b))).collect()
    }

    /// Row-reduced echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Vec<Vec<u8>>, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.col_count() {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && m[i][c] == 1 {
                    let pivot_row = m[r].clone();
                    for (a, b) in m[i].iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// `sum_{k <= max_k} C(n, k)`.
pub fn subsets_up_to(n: usize, max_k: usize) -> u128 {
    (0..=max_k).map(|k| binomial(n, k)).fold(0u128, u128::saturating_add)
}

/// Checks that no nonempty set of fewer than `d` columns of `h` sums to zero,
/// i.e. the code with parity-check matrix `h` has minimum distance at least `d`.
///
/// Uses whichever is cheaper: enumerating all codewords, or matching subset
/// syndromes of at most `ceil((d-1)/2)` columns against each other.
pub fn distance_at_least(h: &BinaryMatrix, d: usize, budget: u128) -> Result<bool> {
    if d <= 1 {
        return Ok(true);
    }
    let n = h.col_count();
    if h.row_count() > 128 {
        return Err(Error::Unsupported("parity-check matrices with more than 128 rows".into()));
    }
    let k = n - h.rank();
    let by_codewords = if k >= 127 { u128::MAX } else { 1u128 << k };
    let by_syndromes = subsets_up_to(n, (d - 1).div_ceil(2));
    if by_codewords.min(by_syndromes) > budget {
        return Err(Error::SearchSpaceTooLarge { needed: by_codewords.min(by_syndromes), budget });
    }
    Ok(if by_codewords <= by_syndromes { distance_by_codewords(h, d) } else { distance_by_syndromes(h, d) })
}

fn distance_by_codewords(h: &BinaryMatrix, d: usize) -> bool {
    let n = h.col_count();
    let basis: Vec<Vec<u64>> = null_space(h).iter().map(|v| pack(v)).collect();
    let mut word = vec![0u64; n.div_ceil(64)];
    for step in 1..(1u128 << basis.len()) {
        for (w, g) in word.iter_mut().zip(&basis[step.trailing_zeros() as usize]) {
            *w ^= g;
        }
        let wt: u32 = word.iter().map(|w| w.count_ones()).sum();
        if (wt as usize) < d {
            return false;
        }
    }
    true
}

/// A zero-sum set of `w < d` columns splits into two distinct subsets of size
/// at most `ceil((d-1)/2)` with equal syndromes, and conversely.
fn distance_by_syndromes(h: &BinaryMatrix, d: usize) -> bool {
    let n = h.col_count();
    let cols: Vec<u128> = (0..n).map(|j| h.column_mask(j)).collect();
    // Smallest subset size seen for each syndrome; sizes are visited in order.
    let mut smallest: HashMap<u128, usize> = HashMap::from([(0, 0)]);
    for size in 1..=(d - 1).div_ceil(2).min(n) {
        for subset in (0..n).combinations(size) {
            let s = subset.iter().fold(0u128, |acc, &j| acc ^ cols[j]);
            match smallest.get(&s) {
                Some(&other) if other + size < d => return false,
                Some(_) => {}
                None => {
                    smallest.insert(s, size);
                }
            }
        }
    }
    true
}

fn pack(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 64] |= u64::from(b) << (i % 64);
    }
    out
}

/// A basis of `{x : h x = 0}`.
pub fn null_space(h: &BinaryMatrix) -> Vec<Vec<u8>> {
    let (m, pivots) = h.rref();
    let n = h.col_count();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; n];
            v[f] = 1;
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = row[f];
            }
            v
        })
        .collect()
}

/// Solves `a x = b` over GF(2); returns `None` if inconsistent and the
/// solution plus a flag telling whether it is unique.
pub fn solve(a: &[Vec<u8>], b: &[u8]) -> Option<(Vec<u8>, bool)> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u8>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] == 1 {
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[cols] == 1) {
        return None;
    }
    let mut x = vec![0u8; cols];
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[cols];
    }
    Some((x, pivots.len() == cols))
}

/// A binary linear code in systematic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    check: BinaryMatrix,
    d: usize,
    info: Vec<usize>,
    parity: Vec<usize>,
    /// For each parity position, the info positions (by index into `info`) it sums.
    parity_rows: Vec<Vec<usize>>,
}

/// JSON form `{"n", "k", "d", "H": rows}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearCodeConfig {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    #[serde(rename = "H")]
    pub h: Vec<String>,
}

impl LinearCode {
    /// Builds the code `{x : check x = 0}` after verifying its minimum distance.
    pub fn from_parity_check(check: BinaryMatrix, d: usize) -> Result<Self> {
        if !distance_at_least(&check, d, DEFAULT_BUDGET)? {
            return Err(Error::MalformedMatrix(format!("minimum distance is below the declared d={d}")));
        }
        Ok(Self::trusted(check, d))
    }

    fn trusted(check: BinaryMatrix, d: usize) -> Self {
        let (m, pivots) = check.rref();
        let n = check.col_count();
        let info: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let parity_rows = m.iter().map(|row| (0..info.len()).filter(|&i| row[info[i]] == 1).collect()).collect();
        Self { check: BinaryMatrix { rows: m }, d, info, parity: pivots, parity_rows }
    }

    /// Parses the `d=<int>` matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        let (m, d) = BinaryMatrix::parse_with_distance(text)?;
        Self::from_parity_check(m, d)
    }

    pub fn from_config(cfg: &LinearCodeConfig) -> Result<Self> {
        let text = format!("d={}\n{}", cfg.d, cfg.h.join("\n"));
        let code = Self::parse(&text)?;
        if code.n() != cfg.n || code.k() != cfg.k {
            return Err(Error::MalformedMatrix(format!(
                "matrix gives n={}, k={}, config says n={}, k={}",
                code.n(),
                code.k(),
                cfg.n,
                cfg.k
            )));
        }
        Ok(code)
    }

    pub fn to_config(&self) -> LinearCodeConfig {
        let text = self.check.to_text(self.d);
        LinearCodeConfig { n: self.n(), k: self.k(), d: self.d, h: text.lines().skip(1).map(String::from).collect() }
    }

    /// The `[k, k, 1]` code that adds nothing.
    pub fn uncoded(k: usize) -> Self {
        Self { check: BinaryMatrix { rows: Vec::new() }, d: 1, info: (0..k).collect(), parity: Vec::new(), parity_rows: Vec::new() }
    }

    /// The `[k+1, k, 2]` single-parity code.
    pub fn single_parity(k: usize) -> Self {
        Self::trusted(BinaryMatrix { rows: vec![vec![1; k + 1]] }, 2)
    }

    pub fn n(&self) -> usize {
        self.info.len() + self.parity.len()
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Positions holding the information symbols, in data order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    /// Positions holding the check symbols.
    pub fn parity_positions(&self) -> &[usize] {
        &self.parity
    }

    /// Check symbols of the codeword for `data`, in the order of [`Self::parity_positions`].
    pub fn parity_of(&self, data: &[u8]) -> Result<Vec<u8>> {
        let word = self.encode(data)?;
        Ok(self.parity.iter().map(|&p| word[p]).collect())
    }

    /// Interleaves information and check symbols into a word with erasures.
    pub fn assemble_word(&self, data: &[Option<u8>], checks: &[Option<u8>]) -> Vec<Option<u8>> {
        let mut word = vec![None; self.n()];
        for (&p, &b) in self.info.iter().zip(data) {
            word[p] = b;
        }
        for (&p, &b) in self.parity.iter().zip(checks) {
            word[p] = b;
        }
        word
    }

    pub fn erasure_capability(&self) -> usize {
        self.d - 1
    }

    pub fn error_capability(&self) -> usize {
        (self.d - 1) / 2
    }

    /// Places `data` on the information positions and fills the parity positions.
    pub fn encode(&self, data: &[u8]) -> Result<Vec<u8>> {
        if data.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), found: data.len() });
        }
        let mut word = vec![0u8; self.n()];
        for (&pos, &b) in self.info.iter().zip(data) {
            word[pos] = b;
        }
        for (&pos, row) in self.parity.iter().zip(&self.parity_rows) {
            word[pos] = row.iter().fold(0, |acc, &i| acc ^ data[i]);
        }
        Ok(word)
    }

    /// The information symbols of a codeword.
    pub fn extract(&self, word: &[u8]) -> Vec<u8> {
        self.info.iter().map(|&p| word[p]).collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n() && self.check.rows.iter().all(|r| r.iter().zip(word).fold(0, |a, (x, y)| a ^ (x & y)) == 0)
    }

    /// Fills erased (`None`) positions so the word becomes a codeword.
    ///
    /// Fails with `TooManyErasures` when the erased positions are not pinned
    /// down uniquely and with `DecodeFailure` when no completion exists.
    pub fn decode_erasures(&self, word: &[Option<u8>]) -> Result<Vec<u8>> {
        if word.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: word.len() });
        }
        let erased: Vec<usize> = (0..word.len()).filter(|&i| word[i].is_none()).collect();
        let known: Vec<u8> = word.iter().map(|b| b.unwrap_or(0)).collect();
        if erased.is_empty() {
            return if self.is_codeword(&known) { Ok(known) } else { Err(Error::DecodeFailure("word is not a codeword".into())) };
        }
        let a: Vec<Vec<u8>> = self.check.rows.iter().map(|r| erased.iter().map(|&j| r[j]).collect()).collect();
        let b = self.check.mul_vec(&known);
        let too_many = Error::TooManyErasures { erasures: erased.len(), capability: self.erasure_capability() };
        if a.is_empty() {
            return Err(too_many);
        }
        match solve(&a, &b) {
            None => Err(Error::DecodeFailure("erased word has no completion".into())),
            Some((_, false)) => Err(too_many),
            Some((x, true)) => {
                let mut out = known;
                for (&j, v) in erased.iter().zip(x) {
                    out[j] = v;
                }
                Ok(out)
            }
        }
    }

    /// The codeword nearest to `word` in Hamming distance, if it is the only
    /// one within the error-correction radius.
    pub fn decode_errors(&self, word: &[u8]) -> Result<Vec<u8>> {
        if word.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: word.len() });
        }
        if self.n() > 128 {
            return Err(Error::Unsupported("nearest-codeword decoding above length 128".into()));
        }
        let needed = 1u128 << self.k().min(127);
        if needed > DEFAULT_BUDGET * 4 {
            return Err(Error::SearchSpaceTooLarge { needed, budget: DEFAULT_BUDGET * 4 });
        }
        let to_mask = |w: &[u8]| w.iter().enumerate().fold(0u128, |acc, (i, &b)| acc | (u128::from(b) << i));
        let target = to_mask(word);
        let generators: Vec<u128> = (0..self.k())
            .map(|i| {
                let mut data = vec![0u8; self.k()];
                data[i] = 1;
                to_mask(&self.encode(&data).expect("length checked"))
            })
            .collect();
        let radius = self.error_capability() as u32;
        let mut current = 0u128;
        let mut found = None;
        for step in 0..(1u128 << self.k()) {
            if step > 0 {
                current ^= generators[step.trailing_zeros() as usize];
            }
            if (current ^ target).count_ones() <= radius {
                found = Some(current);
                break;
            }
        }
        let mask = found.ok_or_else(|| Error::DecodeFailure("no codeword within the correction radius".into()))?;
        Ok((0..self.n()).map(|i| ((mask >> i) & 1) as u8).collect())
    }
}
