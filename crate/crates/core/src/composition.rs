//! Compositions (count pairs) and the prefix/suffix composition multisets of strings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// The number of zeros and ones in a fragment, written `0^a 1^b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition {
    pub zeros: usize,
    pub ones: usize,
}

impl Composition {
    pub fn new(zeros: usize, ones: usize) -> Self {
        Self { zeros, ones }
    }

    /// Composition of a fragment of length `len` with `ones` ones.
    pub fn with_length(len: usize, ones: usize) -> Self {
        debug_assert!(ones <= len);
        Self { zeros: len - ones, ones }
    }

    pub fn len(&self) -> usize {
        self.zeros + self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len(), self.ones).cmp(&(other.len(), other.ones))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |sym: char, e: usize| match e {
            0 => None,
            1 => Some(sym.to_string()),
            _ => Some(format!("{sym}^{e}")),
        };
        let parts: Vec<String> = [part('0', self.zeros), part('1', self.ones)].into_iter().flatten().collect();
        if parts.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts the spaced form `0^2 1^3`, `0 1^2`, `1`, explicit zero exponents
/// such as `0^0 1^1`, and unspaced forms like `01^2` or `0^21^3` when the split
/// is unambiguous. Inside one token an exponent takes every following digit,
/// so `0^21` means twenty-one zeros.
impl FromStr for Composition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidComposition(text.to_string());
        let mut counts = [0usize; 2];
        let mut last: Option<usize> = None;
        for token in text.split_whitespace() {
            let chars: Vec<char> = token.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let sym = match chars[i] {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(bad()),
                };
                if last.is_some_and(|l| l >= sym) {
                    return Err(bad());
                }
                last = Some(sym);
                i += 1;
                let mut exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    let start = i + 1;
                    let mut end = start;
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                    // `0^21^3`: the digit before the second caret is the `1` part.
                    if end < chars.len() && chars[end] == '^' && sym == 0 && end - start > 1 && chars[end - 1] == '1' {
                        end -= 1;
                    }
                    let digits: String = chars[start..end].iter().collect();
                    exp = digits.parse().map_err(|_| bad())?;
                    i = end;
                }
                counts[sym] = exp;
            }
        }
        if last.is_none() {
            return Err(bad());
        }
        Ok(Self { zeros: counts[0], ones: counts[1] })
    }
}

/// A multiset of compositions in canonical `(length, ones)` order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CompositionMultiset {
    entries: BTreeMap<Composition, usize>,
}

/// One line of the JSON form.
#[derive(Serialize, Deserialize)]
struct Entry {
    zeros: usize,
    ones: usize,
    mult: usize,
}

impl CompositionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Composition) {
        self.insert_n(c, 1);
    }

    pub fn insert_n(&mut self, c: Composition, mult: usize) {
        if mult > 0 {
            *self.entries.entry(c).or_insert(0) += mult;
        }
    }

    /// Removes one copy; returns false if `c` is absent.
    pub fn remove(&mut self, c: &Composition) -> bool {
        match self.entries.get_mut(c) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(c);
                true
            }
            None => false,
        }
    }

    pub fn count(&self, c: &Composition) -> usize {
        self.entries.get(c).copied().unwrap_or(0)
    }

    /// Total number of elements, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct compositions with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Composition, usize)> + '_ {
        self.entries.iter().map(|(&c, &m)| (c, m))
    }

    /// Every element, repeated by multiplicity, in canonical order.
    pub fn expanded(&self) -> impl Iterator<Item = Composition> + '_ {
        self.iter().flat_map(|(c, m)| std::iter::repeat(c).take(m))
    }

    /// Entries of one fragment length, in ascending order of ones.
    pub fn at_length(&self, len: usize) -> Vec<(Composition, usize)> {
        self.entries
            .range(Composition::with_length(len, 0)..=Composition::with_length(len, len))
            .map(|(&c, &m)| (c, m))
            .collect()
    }

    pub fn count_at_length(&self, len: usize) -> usize {
        self.at_length(len).iter().map(|(_, m)| m).sum()
    }

    pub fn max_len(&self) -> usize {
        self.entries.keys().next_back().map_or(0, Composition::len)
    }

    /// Multiset sum.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn extend_from(&mut self, other: &Self) {
        for (c, m) in other.iter() {
            self.insert_n(c, m);
        }
    }

    /// True if every element of `other` occurs here at least as often.
    pub fn contains_all(&self, other: &Self) -> bool {
        other.iter().all(|(c, m)| self.count(&c) >= m)
    }

    /// `self - other`, or `None` if `other` is not contained.
    pub fn difference(&self, other: &Self) -> Option<Self> {
        if !self.contains_all(other) {
            return None;
        }
        let mut out = self.clone();
        for (c, m) in other.iter() {
            for _ in 0..m {
                out.remove(&c);
            }
        }
        Some(out)
    }

    /// Canonical JSON: `[{"zeros":a,"ones":b,"mult":m}, ...]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("multiset serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComposition(e.to_string()))
    }
}

impl FromIterator<Composition> for CompositionMultiset {
    fn from_iter<I: IntoIterator<Item = Composition>>(iter: I) -> Self {
        let mut out = Self::new();
        for c in iter {
            out.insert(c);
        }
        out
    }
}

impl Extend<Composition> for CompositionMultiset {
    fn extend<I: IntoIterator<Item = Composition>>(&mut self, iter: I) {
        for c in iter {
            self.insert(c);
        }
    }
}

impl fmt::Display for CompositionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.expanded().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl fmt::Debug for CompositionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CompositionMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(c, m)| Entry { zeros: c.zeros, ones: c.ones, mult: m }))
    }
}

impl<'de> Deserialize<'de> for CompositionMultiset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        let mut out = Self::new();
        for e in entries {
            if e.zeros + e.ones == 0 || e.mult == 0 {
                return Err(serde::de::Error::custom("empty composition or zero multiplicity"));
            }
            out.insert_n(Composition::new(e.zeros, e.ones), e.mult);
        }
        Ok(out)
    }
}

/// `(n - wt(s), wt(s))`.
pub fn composition(s: &BitString) -> Composition {
    Composition::with_length(s.len(), s.weight())
}

/// Compositions of `s_1..s_i` for every `i`.
pub fn prefix_multiset(s: &BitString) -> CompositionMultiset {
    (1..=s.len()).map(|i| Composition::with_length(i, s.prefix_weight(i))).collect()
}

/// Compositions of `s_i..s_n` for every `i`.
pub fn suffix_multiset(s: &BitString) -> CompositionMultiset {
    (1..=s.len()).map(|i| Composition::with_length(i, s.suffix_weight(i))).collect()
}

/// Prefixes and suffixes together; the full-length composition appears twice.
pub fn full_multiset(s: &BitString) -> CompositionMultiset {
    prefix_multiset(s).union(&suffix_multiset(s))
}

/// Union of the full multisets of distinct equal-length strings.
pub fn pool(strings: &[BitString]) -> Result<CompositionMultiset> {
    let mut seen = HashSet::new();
    let mut out = CompositionMultiset::new();
    for s in strings {
        if s.len() != strings[0].len() {
            return Err(Error::LengthMismatch { expected: strings[0].len(), found: s.len() });
        }
        if !seen.insert(s) {
            return Err(Error::DuplicateString(s.to_string()));
        }
        out.extend_from(&full_multiset(s));
    }
    Ok(out)
}

/// Weight exactly half and every prefix at least half ones (rounded up).
pub fn is_dyck(s: &BitString) -> Result<bool> {
    let n = s.len();
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    if s.weight() != n / 2 {
        return Ok(false);
    }
    Ok(s.rds_profile().iter().all(|&r| r >= 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ms(items: &[&str]) -> CompositionMultiset {
        items.iter().map(|t| t.parse::<Composition>().unwrap()).collect()
    }

    #[test]
    fn composition_text_round_trip() {
        for (text, z, o) in [("0^2 1^3", 2, 3), ("0 1^2", 1, 2), ("1", 0, 1), ("0^3", 3, 0), ("0 1", 1, 1)] {
            let c: Composition = text.parse().unwrap();
            assert_eq!((c.zeros, c.ones), (z, o));
            assert_eq!(c.to_string(), text);
        }
    }

    #[test]
    fn composition_parses_unspaced_forms() {
        let cases = [("01^2", 1, 2), ("0^21^3", 2, 3), ("0^2 1", 2, 1), ("0^21", 21, 0), ("0^0 1^1", 0, 1), ("01", 1, 1)];
        for (text, z, o) in cases {
            assert_eq!(text.parse::<Composition>().unwrap(), Composition::new(z, o), "{text}");
        }
        assert!("".parse::<Composition>().is_err());
        assert!("1 0".parse::<Composition>().is_err());
        assert!("2".parse::<Composition>().is_err());
    }

    #[test]
    fn composition_of_strings() {
        assert_eq!(composition(&bs("001")), Composition::new(2, 1));
        assert_eq!(composition(&bs("1")), Composition::new(0, 1));
        assert_eq!(composition(&bs("01101")), Composition::new(2, 3));
    }

    #[test]
    fn prefix_and_suffix_multisets() {
        assert_eq!(prefix_multiset(&bs("01101")), ms(&["0", "01", "01^2", "0^21^2", "0^21^3"]));
        assert_eq!(prefix_multiset(&bs("1")), ms(&["1"]));
        assert_eq!(prefix_multiset(&bs("001")), ms(&["0", "0^2", "0^2 1"]));
        assert_eq!(suffix_multiset(&bs("01101")), ms(&["1", "01", "01^2", "01^3", "0^21^3"]));
        assert_eq!(suffix_multiset(&bs("0")), ms(&["0"]));
        assert_eq!(suffix_multiset(&bs("001")), ms(&["1", "01", "0^2 1"]));
    }

    #[test]
    fn full_multiset_examples() {
        let m = full_multiset(&bs("01101"));
        assert_eq!(m.len(), 10);
        assert_eq!(m.to_string(), "{0, 1, 0 1, 0 1, 0 1^2, 0 1^2, 0^2 1^2, 0 1^3, 0^2 1^3, 0^2 1^3}");
        assert_eq!(full_multiset(&bs("1")), ms(&["1", "1"]));
        assert_eq!(full_multiset(&bs("001")), ms(&["0", "0^2", "0^2 1", "1", "01", "0^2 1"]));
    }

    #[test]
    fn pool_errors_and_sizes() {
        let p = pool(&[bs("110100"), bs("101010")]).unwrap();
        assert_eq!(p.len(), 24);
        assert_eq!(pool(&[bs("110100"), bs("101010"), bs("110010")]).unwrap().len(), 36);
        assert_eq!(pool(&[bs("110100")]).unwrap(), full_multiset(&bs("110100")));
        assert_eq!(pool(&[bs("10"), bs("10")]), Err(Error::DuplicateString("10".into())));
        assert_eq!(pool(&[bs("10"), bs("100")]), Err(Error::LengthMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn dyck_examples() {
        assert!(is_dyck(&bs("110100")).unwrap());
        assert!(!is_dyck(&bs("01")).unwrap());
        assert!(is_dyck(&bs("10")).unwrap());
        assert_eq!(is_dyck(&bs("101")), Err(Error::OddLength(3)));
    }

    #[test]
    fn json_is_canonical() {
        let m = prefix_multiset(&bs("001"));
        assert_eq!(
            m.to_json(),
            r#"[{"zeros":1,"ones":0,"mult":1},{"zeros":2,"ones":0,"mult":1},{"zeros":2,"ones":1,"mult":1}]"#
        );
        assert_eq!(CompositionMultiset::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn multiset_arithmetic() {
        let a = ms(&["0", "01", "01"]);
        let b = ms(&["01"]);
        assert!(a.contains_all(&b));
        assert_eq!(a.difference(&b).unwrap(), ms(&["0", "01"]));
        assert_eq!(b.difference(&a), None);
        assert_eq!(a.count_at_length(2), 2);
        assert_eq!(a.max_len(), 2);
    }
}
