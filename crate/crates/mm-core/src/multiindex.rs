//! Multi-indices n = (n_1, ..., n_r) of nonnegative integers.
//!
//! These index both the polynomial families and the Fock basis states. The
//! ordering is graded lexicographic (total degree first, then lexicographic),
//! which gives every coefficient map and lattice a deterministic iteration
//! order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A vector of nonnegative integers with fixed length r >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        assert!(!entries.is_empty(), "multi-index must have length >= 1");
        MultiIndex(entries)
    }

    pub fn zero(r: usize) -> Self {
        MultiIndex::new(vec![0; r])
    }

    /// The unit vector e_j (0-based j).
    pub fn unit(r: usize, j: usize) -> Self {
        let mut v = vec![0; r];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    /// |n| = n_1 + ... + n_r.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// n + e_k.
    pub fn raised(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiIndex(v)
    }

    /// n - e_j, or None when n_j = 0.
    pub fn lowered(&self, j: usize) -> Option<Self> {
        if self.0[j] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[j] -= 1;
        Some(MultiIndex(v))
    }

    /// Apply a permutation: result[i] = self[perm[i]].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        MultiIndex::new(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All indices with |k| = degree, in lexicographic order.
pub fn shell(r: usize, degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0usize; r];
    fill_shell(&mut out, &mut current, 0, degree);
    out
}

fn fill_shell(out: &mut Vec<MultiIndex>, current: &mut Vec<usize>, pos: usize, remaining: usize) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill_shell(out, current, pos + 1, remaining - v);
    }
}

/// All indices with |k| <= max_total, graded (degree-by-degree) order.
pub fn indices_up_to_total(r: usize, max_total: usize) -> Vec<MultiIndex> {
    (0..=max_total).flat_map(|d| shell(r, d)).collect()
}

/// All indices in the box 0 <= n_i <= caps[i], graded-lexicographic order.
pub fn indices_in_box(caps: &[usize]) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0usize; caps.len()];
    fill_box(&mut out, &mut current, 0, caps);
    out.sort();
    out
}

fn fill_box(out: &mut Vec<MultiIndex>, current: &mut Vec<usize>, pos: usize, caps: &[usize]) {
    if pos == caps.len() {
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    for v in 0..=caps[pos] {
        current[pos] = v;
        fill_box(out, current, pos + 1, caps);
    }
}
