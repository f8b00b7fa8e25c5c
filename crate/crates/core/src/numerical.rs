//! Multiplicity sequences of Arf numerical semigroups.
//!
//! An Arf numerical semigroup is determined by its multiplicity sequence
//! `m_1 >= m_2 >= ...`, which is eventually constant at 1. Its elements are
//! `0` and the partial sums `m_1 + ... + m_j`. The sequence is Arf exactly
//! when every `m_j` is the sum of a run of the entries that follow it.
//!
//! Sequences are stored canonically, with trailing 1s removed. Levels are
//! 1-based and every entry past the stored prefix reads as 1.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Multiplicity sequence of an Arf numerical semigroup, in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicitySequence {
    entries: Vec<u64>,
}

/// The split indices `s_1, ..., s_M` of a sequence: `m_j` is the sum of
/// `m_{j+1}, ..., m_{s_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SVector(pub Vec<usize>);

/// Restriction numbers and characters of a multiplicity sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterData {
    /// `r(m_1), ..., r(m_N)`, where `N` is the last level touched by a
    /// defining sum of an entry greater than 1 (at least the padded length).
    pub restriction: Vec<usize>,
    /// Levels `j` with `r(m_j) < r(m_{j+1})`.
    pub pchar: BTreeSet<usize>,
    /// Partial sums `m_1 + ... + m_j` for `j` in `pchar`.
    #[serde(rename = "char")]
    pub chars: BTreeSet<u64>,
}

impl MultiplicitySequence {
    /// Validates `entries` (read with 1-padding) and returns the canonical
    /// sequence.
    pub fn new(entries: &[u64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(pos) = entries.iter().position(|&m| m == 0) {
            return Err(Error::ZeroEntry { index: pos + 1 });
        }
        let at = |k: usize| entries.get(k - 1).copied().unwrap_or(1);
        for j in 1..=entries.len() {
            let target = at(j);
            let mut sum = 0;
            let mut k = j;
            while sum < target {
                k += 1;
                sum += at(k);
            }
            if sum != target {
                return Err(Error::NotArfSequence { index: j });
            }
        }
        let keep = entries.iter().rposition(|&m| m > 1).map_or(0, |p| p + 1);
        Ok(Self {
            entries: entries[..keep].to_vec(),
        })
    }

    /// The sequence of `N` itself: all entries equal to 1.
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonical entries (no trailing 1s; empty for the trivial sequence).
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Number of canonical entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    /// `m_level`, 1-based.
    pub fn get(&self, level: usize) -> u64 {
        debug_assert!(level >= 1);
        self.entries.get(level - 1).copied().unwrap_or(1)
    }

    /// The first `len` entries, padded with 1s.
    pub fn padded(&self, len: usize) -> Vec<u64> {
        (1..=len).map(|j| self.get(j)).collect()
    }

    /// `m_1 + ... + m_level`.
    pub fn partial_sum(&self, level: usize) -> u64 {
        let stored: u64 = self.entries.iter().take(level).sum();
        stored + level.saturating_sub(self.entries.len()) as u64
    }

    /// The level `j` with `m_1 + ... + m_j = value`, if any.
    pub fn position(&self, value: u64) -> Option<usize> {
        if value == 0 {
            return None;
        }
        let mut sum = 0;
        for (j, &m) in self.entries.iter().enumerate() {
            sum += m;
            if sum == value {
                return Some(j + 1);
            }
            if sum > value {
                return None;
            }
        }
        Some(self.entries.len() + (value - sum) as usize)
    }

    /// Conductor of the semigroup: the sum of the canonical entries.
    pub fn conductor(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn contains(&self, value: u64) -> bool {
        value == 0 || self.position(value).is_some()
    }

    /// Elements of the semigroup up to `bound`, ascending.
    pub fn elements(&self, bound: u64) -> Vec<u64> {
        let mut out = vec![0];
        let mut sum = 0;
        let mut level = 1;
        loop {
            sum += self.get(level);
            if sum > bound {
                break;
            }
            out.push(sum);
            level += 1;
        }
        out
    }

    /// The split index `s_level`.
    fn split_index(&self, level: usize) -> usize {
        let target = self.get(level);
        let mut sum = 0;
        let mut k = level;
        while sum < target {
            k += 1;
            sum += self.get(k);
        }
        debug_assert_eq!(sum, target);
        k
    }

    /// The S-vector over `padded_length` levels, which must leave at least
    /// two trailing 1s.
    pub fn s_vector(&self, padded_length: usize) -> Result<SVector> {
        let minimum = self.entries.len() + 2;
        if padded_length < minimum {
            return Err(Error::PaddingTooShort {
                requested: padded_length,
                minimum,
            });
        }
        Ok(SVector(
            (1..=padded_length).map(|j| self.split_index(j)).collect(),
        ))
    }

    /// Rebuilds a sequence from its S-vector: `m_M = 1`, then each `m_j` is
    /// the sum of `m_{j+1}, ..., m_{s_j}` (entries past `M` read as 1).
    pub fn from_s_vector(sv: &SVector) -> Result<Self> {
        let s = &sv.0;
        let len = s.len();
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        for (idx, &sj) in s.iter().enumerate() {
            let j = idx + 1;
            if sj < j + 1 {
                return Err(Error::MalformedSVector {
                    index: j,
                    reason: "s_j must be at least j + 1",
                });
            }
            if j + 1 >= len && sj != j + 1 {
                return Err(Error::MalformedSVector {
                    index: j,
                    reason: "the last two levels must split at j + 1",
                });
            }
        }
        let mut m = vec![1u64; len];
        for j in (1..=len).rev() {
            let sj = s[j - 1];
            let inside: u64 = (j + 1..=sj.min(len)).map(|k| m[k - 1]).sum();
            let outside = sj.saturating_sub(len) as u64;
            m[j - 1] = inside + outside;
        }
        Self::new(&m)
    }

    /// Restriction numbers, PChar and Char.
    pub fn characters(&self) -> CharacterData {
        let padded = self.entries.len() + 2;
        let reach = (1..=self.entries.len())
            .map(|q| self.split_index(q))
            .max()
            .unwrap_or(0);
        let n = padded.max(reach);
        let splits: Vec<usize> = (1..=n).map(|q| self.split_index(q)).collect();
        // r_j = #{q : q < j <= s_q}
        let r: Vec<usize> = (1..=n + 1)
            .map(|j| {
                splits[..j - 1]
                    .iter()
                    .filter(|&&sq| j <= sq)
                    .count()
            })
            .collect();
        let pchar: BTreeSet<usize> = (1..=n).filter(|&j| r[j - 1] < r[j]).collect();
        let chars = pchar.iter().map(|&j| self.partial_sum(j)).collect();
        CharacterData {
            restriction: r[..n].to_vec(),
            pchar,
            chars,
        }
    }
}

/// Multiplicity sequence of the smallest Arf numerical semigroup containing
/// `values`, by the multi-Euclidean reduction: emit the minimum `m` of the
/// current set and replace the set by `{m} ∪ {x - m : x > m}` until only
/// `{1}` is left.
pub fn duval_closure(values: &[u64]) -> Result<MultiplicitySequence> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(pos) = values.iter().position(|&v| v == 0) {
        return Err(Error::ZeroEntry { index: pos + 1 });
    }
    let g = values.iter().copied().fold(0, gcd);
    if g != 1 {
        return Err(Error::GcdNotOne { gcd: g });
    }
    let mut current: BTreeSet<u64> = values.iter().copied().collect();
    let mut emitted = Vec::new();
    loop {
        let m = *current.first().expect("nonempty");
        if m == 1 && current.len() == 1 {
            break;
        }
        emitted.push(m);
        let mut next: BTreeSet<u64> = current.range(m + 1..).map(|&x| x - m).collect();
        next.insert(m);
        current = next;
    }
    emitted.push(1);
    MultiplicitySequence::new(&emitted)
}

/// All elements `<= bound` of the semigroup of `seq`.
pub fn semigroup_elements(seq: &MultiplicitySequence, bound: u64) -> Vec<u64> {
    seq.elements(bound)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for MultiplicitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("[1]");
        }
        f.write_str("[")?;
        for (i, m) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for MultiplicitySequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.entries.is_empty() {
            [1u64].serialize(serializer)
        } else {
            self.entries.serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for MultiplicitySequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<u64>::deserialize(deserializer)?;
        MultiplicitySequence::new(&raw).map_err(serde::de::Error::custom)
    }
}
