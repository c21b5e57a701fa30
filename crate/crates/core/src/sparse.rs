//! Nonnegative sparse vectors keyed by node, with a cached ℓ₁ norm.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::NodeId;

/// Tolerance for "‖v‖₁ = 1" checks on preference and patch distributions.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SparseError {
    #[error("entry {node}: invalid value {value}")]
    InvalidValue { node: NodeId, value: f64 },
    #[error("entry {node} given twice")]
    Duplicate { node: NodeId },
}

/// Sparse vector with strictly positive stored entries. Absent keys are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: BTreeMap<NodeId, f64>,
    l1: f64,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// `value · χ_x`.
    pub fn singleton(node: NodeId, value: f64) -> Self {
        let mut v = Self::new();
        v.add(node, value);
        v
    }

    /// Builds a vector from `(node, value)` pairs. Zeros are skipped;
    /// negative or non-finite values and repeated nodes are errors.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, SparseError>
    where
        I: IntoIterator<Item = (NodeId, f64)>,
    {
        let mut v = Self::new();
        for (node, value) in pairs {
            if !value.is_finite() || value < 0.0 {
                return Err(SparseError::InvalidValue { node, value });
            }
            if v.entries.contains_key(&node) {
                return Err(SparseError::Duplicate { node });
            }
            if value > 0.0 {
                v.entries.insert(node, value);
            }
        }
        v.l1 = v.entries.values().sum();
        Ok(v)
    }

    /// Keeps the positive entries of a dense slice.
    pub fn from_dense(values: &[f64]) -> Self {
        let entries: BTreeMap<_, _> = values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0.0)
            .map(|(i, &x)| (NodeId(i), x))
            .collect();
        let l1 = entries.values().sum();
        SparseVector { entries, l1 }
    }

    /// Uniform distribution over `n` nodes.
    pub fn uniform(n: usize) -> Self {
        Self::from_dense(&vec![1.0 / n as f64; n])
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&node, &value) in &self.entries {
            out[node.0] = value;
        }
        out
    }

    #[inline]
    pub fn get(&self, node: NodeId) -> f64 {
        self.entries.get(&node).copied().unwrap_or(0.0)
    }

    /// Adds `delta ≥ 0` to entry `node`. Nonpositive deltas are ignored.
    pub fn add(&mut self, node: NodeId, delta: f64) {
        if delta > 0.0 {
            *self.entries.entry(node).or_insert(0.0) += delta;
            self.l1 += delta;
        }
    }

    /// `self + factor · other`, for `factor ≥ 0`.
    pub fn add_scaled(&mut self, other: &SparseVector, factor: f64) {
        if factor > 0.0 {
            for (&node, &value) in &other.entries {
                self.add(node, factor * value);
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        let entries: BTreeMap<_, _> = self
            .entries
            .iter()
            .map(|(&k, &v)| (k, v * factor))
            .filter(|&(_, v)| v > 0.0)
            .collect();
        let l1 = entries.values().sum();
        SparseVector { entries, l1 }
    }

    /// Cached ℓ₁ norm.
    #[inline]
    pub fn l1(&self) -> f64 {
        self.l1
    }

    /// ℓ₁ norm summed afresh from the stored entries.
    pub fn recompute_l1(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in increasing node order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (NodeId, f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_node(&self) -> Option<NodeId> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_distribution(&self) -> bool {
        (self.l1 - 1.0).abs() <= DISTRIBUTION_TOLERANCE
    }

    /// Rescales to unit ℓ₁ norm; also returns the relative change
    /// `|‖v‖₁ − 1|`. Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<(SparseVector, f64)> {
        if self.l1 <= 0.0 {
            return None;
        }
        Some((self.scaled(1.0 / self.l1), (self.l1 - 1.0).abs()))
    }

    /// Entries by decreasing value, ties by increasing node.
    pub fn ranked(&self) -> Vec<(NodeId, f64)> {
        let mut out: Vec<_> = self.iter().collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }

    /// `‖self − other‖₁`.
    pub fn l1_distance(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        for (node, value) in self.iter() {
            sum += (value - other.get(node)).abs();
        }
        for (node, value) in other.iter() {
            if !self.entries.contains_key(&node) {
                sum += value;
            }
        }
        sum
    }

    /// `‖self − dense‖₁` against a dense vector of the same dimension.
    pub fn l1_distance_dense(&self, dense: &[f64]) -> f64 {
        let mut sum: f64 = dense.iter().map(|x| x.abs()).sum();
        for (node, value) in self.iter() {
            let d = dense.get(node.0).copied().unwrap_or(0.0);
            sum += (value - d).abs() - d.abs();
        }
        sum
    }
}

impl FromIterator<(NodeId, f64)> for SparseVector {
    /// Accumulates pairs, summing repeated nodes and skipping nonpositive values.
    fn from_iter<T: IntoIterator<Item = (NodeId, f64)>>(iter: T) -> Self {
        let mut v = SparseVector::new();
        for (node, value) in iter {
            v.add(node, value);
        }
        v
    }
}
