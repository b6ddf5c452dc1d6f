use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use super::BMatrix;
use crate::error::{Error, Result};
use crate::scalars::{GoldenRational, Scalar};

/// Largest `n` accepted by the brute-force search over `n!` permutations.
pub const MAX_BRUTE_FORCE_N: usize = 8;

const QUANTUM: f64 = 1e9;

/// Totally ordered, hashable image of a scalar.
///
/// Exact entries compare by real value. Float entries are rounded to nine
/// decimals first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyEntry {
    Exact(GoldenRational),
    Float(i64),
}

impl From<&Scalar> for KeyEntry {
    fn from(x: &Scalar) -> Self {
        match x {
            Scalar::Exact(r) => KeyEntry::Exact(*r),
            Scalar::Float(v) => KeyEntry::Float((v * QUANTUM).round() as i64),
        }
    }
}

impl fmt::Display for KeyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyEntry::Exact(r) => write!(f, "{r}"),
            KeyEntry::Float(k) => write!(f, "{}", *k as f64 / QUANTUM),
        }
    }
}

/// Row-major entries of the lexicographically least `P B Pᵀ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: usize,
    entries: Vec<KeyEntry>,
}

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[KeyEntry] {
        &self.entries
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| format!("[{}]", r.iter().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Canonical key together with a permutation `perm` such that
/// `b.permuted(&perm)` renders to the key.
pub fn canonical_form(b: &BMatrix) -> Result<(CanonicalKey, Vec<usize>)> {
    let n = b.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let flat: Vec<KeyEntry> = b.entries().iter().map(KeyEntry::from).collect();
    let at = |perm: &[usize], ij: usize| flat[perm[ij / n] * n + perm[ij % n]];

    let mut best: Vec<usize> = (0..n).collect();
    for perm in (0..n).permutations(n) {
        let cmp = (0..n * n)
            .map(|ij| at(&perm, ij).cmp(&at(&best, ij)))
            .find(|o| *o != Ordering::Equal);
        if cmp == Some(Ordering::Less) {
            best = perm;
        }
    }
    let entries = (0..n * n).map(|ij| at(&best, ij)).collect();
    Ok((CanonicalKey { n, entries }, best))
}

pub fn canonical_key(b: &BMatrix) -> Result<CanonicalKey> {
    canonical_form(b).map(|(key, _)| key)
}
