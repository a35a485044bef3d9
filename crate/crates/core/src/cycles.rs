//! Length-4 cycle detection for rows of circulant blocks.
//!
//! Two rows of a circulant share two columns exactly when some circular
//! difference between support exponents occurs twice. Across two blocks of
//! `[H_0 | H_1 | ...]`, two rows meet in one column of each block exactly when
//! the blocks have a difference in common.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf2_poly::SparsePoly;

/// Multiset of directed circular distances `(e_j - e_i) mod n`, `i != j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMultiset {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl DistanceMultiset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, d: usize) -> usize {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    /// Total number of ordered pairs, `W (W - 1)`.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distances with multiplicity at least 2.
    pub fn repeated(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().filter(|(_, &c)| c >= 2).map(|(&d, _)| d)
    }

    pub fn shares_distance_with(&self, other: &DistanceMultiset) -> bool {
        self.counts.keys().any(|d| other.counts.contains_key(d))
    }
}

fn directed_distances(a: &SparsePoly) -> impl Iterator<Item = usize> + '_ {
    let n = a.n();
    let s = a.support();
    s.iter().flat_map(move |&x| {
        s.iter()
            .filter(move |&&y| y != x)
            .map(move |&y| (y + n - x) % n)
    })
}

pub fn distance_multiset(a: &SparsePoly) -> DistanceMultiset {
    let mut counts = BTreeMap::new();
    for d in directed_distances(a) {
        *counts.entry(d).or_insert(0) += 1;
    }
    DistanceMultiset { n: a.n(), counts }
}

pub fn has_length4_cycle(a: &SparsePoly) -> bool {
    let mut seen = vec![false; a.n()];
    for d in directed_distances(a) {
        if std::mem::replace(&mut seen[d], true) {
            return true;
        }
    }
    false
}

/// Whether blocks `a` and `b`, placed side by side, close a rectangle between them.
pub fn cross_block_cycle(a: &SparsePoly, b: &SparsePoly) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::RingSizeMismatch { left: a.n(), right: b.n() });
    }
    let mut in_a = vec![false; a.n()];
    for d in directed_distances(a) {
        in_a[d] = true;
    }
    Ok(directed_distances(b).any(|d| in_a[d]))
}

/// Girth of the Tanner graph of `[H_0 | ... | H_{N_b-1}]` is at least 6:
/// no block has a repeated distance and no two blocks share one.
pub fn matrix_girth_ok(blocks: &[SparsePoly]) -> Result<bool> {
    let Some(first) = blocks.first() else {
        return Ok(true);
    };
    let n = first.n();
    if let Some(b) = blocks.iter().find(|b| b.n() != n) {
        return Err(Error::RingSizeMismatch { left: n, right: b.n() });
    }
    let mut seen = vec![false; n];
    for b in blocks {
        for d in directed_distances(b) {
            if std::mem::replace(&mut seen[d], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
