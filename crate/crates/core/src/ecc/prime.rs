//! Systematic linear codes over a prime field, used to protect real-valued
//! sums of at most `h < p` binary strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest prime strictly above `h`.
pub fn next_prime_above(h: usize) -> usize {
    (h + 1..).find(|&p| p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).expect("primes are unbounded")
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// The code `{(x, c) : A x + c = 0}` over `F_p` with check matrix `[A | I]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCode {
    p: u64,
    k: usize,
    /// `rho` rows of length `k`.
    a: Vec<Vec<u64>>,
    erasures: usize,
}

impl PrimeCode {
    /// A code of dimension `k` filling any `erasures <= 2` erased symbols:
    /// none, a single check sum, or a Hamming-type code whose columns are
    /// pairwise independent.
    pub fn new(p: usize, k: usize, erasures: usize) -> Result<Self> {
        let p64 = p as u64;
        let a = match erasures {
            0 => Vec::new(),
            1 => vec![vec![1; k]],
            2 => {
                let mut rho = 2;
                while (p.pow(rho as u32) - 1) / (p - 1) - rho < k {
                    rho += 1;
                }
                // Projective points with leading nonzero 1, skipping unit vectors.
                let mut columns = Vec::with_capacity(k);
                let mut v = 1u64;
                while columns.len() < k {
                    let digits: Vec<u64> = (0..rho).map(|i| v / p64.pow(i as u32) % p64).collect();
                    v += 1;
                    let lead = digits.iter().rev().find(|&&d| d != 0).copied();
                    if lead == Some(1) && digits.iter().filter(|&&d| d != 0).count() > 1 {
                        columns.push(digits);
                    }
                }
                (0..rho).map(|r| columns.iter().map(|c| c[r]).collect()).collect()
            }
            e => return Err(Error::Unsupported(format!("prime-field codes for {e} erasures"))),
        };
        Ok(Self { p: p64, k, a, erasures })
    }

    pub fn p(&self) -> usize {
        self.p as usize
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of check symbols.
    pub fn redundancy(&self) -> usize {
        self.a.len()
    }

    pub fn erasure_capability(&self) -> usize {
        self.erasures
    }

    /// Bits per check symbol in its binary expansion.
    pub fn symbol_bits(&self) -> usize {
        (usize::BITS - (self.p as usize - 1).leading_zeros()) as usize
    }

    /// `c = -A x mod p`.
    pub fn checks(&self, x: &[u64]) -> Vec<u64> {
        self.a.iter().map(|row| (self.p - row.iter().zip(x).map(|(a, b)| a * (b % self.p)).sum::<u64>() % self.p) % self.p).collect()
    }

    /// Fills the erased symbols of `x · c`; fails unless they are pinned.
    pub fn decode_erasures(&self, x: &[Option<u64>], c: &[Option<u64>]) -> Result<Vec<u64>> {
        let p = self.p;
        let n = self.k + self.a.len();
        let word: Vec<Option<u64>> = x.iter().chain(c).copied().collect();
        if word.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: word.len() });
        }
        let erased: Vec<usize> = (0..n).filter(|&i| word[i].is_none()).collect();
        let col = |r: usize, j: usize| if j < self.k { self.a[r][j] } else { u64::from(j - self.k == r) };
        // Rows: A_E z = -(H_K w_K).
        let mut m: Vec<Vec<u64>> = (0..self.a.len())
            .map(|r| {
                let known: u64 = (0..n).filter_map(|j| word[j].map(|v| col(r, j) * (v % p) % p)).sum::<u64>() % p;
                let mut row: Vec<u64> = erased.iter().map(|&j| col(r, j)).collect();
                row.push((p - known) % p);
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for c in 0..erased.len() {
            let Some(r) = (pivot_row..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(pivot_row, r);
            let inv = inverse(m[pivot_row][c], p);
            for v in m[pivot_row].iter_mut() {
                *v = *v * inv % p;
            }
            for r in 0..m.len() {
                if r != pivot_row && m[r][c] != 0 {
                    let f = m[r][c];
                    for j in 0..=erased.len() {
                        m[r][j] = (m[r][j] + p * p - f * m[pivot_row][j]) % p;
                    }
                }
            }
            pivots.push(c);
            pivot_row += 1;
        }
        if m[pivot_row..].iter().any(|row| row[erased.len()] != 0) {
            return Err(Error::DecodeFailure("residue word has no completion".into()));
        }
        if pivots.len() < erased.len() {
            return Err(Error::TooManyErasures { erasures: erased.len(), capability: self.erasures });
        }
        let mut out: Vec<u64> = word.iter().map(|v| v.unwrap_or(0) % p).collect();
        for (r, &c) in pivots.iter().enumerate() {
            out[erased[c]] = m[r][erased.len()];
        }
        Ok(out[..self.k].to_vec())
    }
}
