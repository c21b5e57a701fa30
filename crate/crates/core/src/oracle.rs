//! Dense, slow, trusted computations used to check the push engine and to
//! precompute hub and patch vectors.
//!
//! Vectors are row vectors: the ranking **w** = (1 − α) **v** (1 − α*M*)⁻¹
//! solves **w** (*I* − α*M*) = (1 − α) **v**, i.e. the column system
//! (*I* − α*M*)ᵀ **w**ᵀ = (1 − α) **v**ᵀ, which [`DenseRanker`] factors once by
//! Gaussian elimination with partial pivoting.

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::sparse::SparseVector;

/// Largest graph the dense routines accept.
pub const ORACLE_MAX_NODES: usize = 5000;

/// Neumann-series truncation: stop once the tail bound drops below this.
pub const SERIES_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} nodes; the dense oracle is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("damping factor {0} outside [0, 1)")]
    InvalidAlpha(f64),
    #[error("vector has length {found}, graph has {expected} nodes")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("patch vector is not a distribution (ℓ₁ norm {0})")]
    PatchNotDistribution(f64),
    #[error("singular system")]
    Singular,
}

/// Dense vector with one entry per node.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(pub Vec<f64>);

impl DenseVector {
    pub fn zeros(n: usize) -> Self {
        DenseVector(vec![0.0; n])
    }

    pub fn indicator(n: usize, x: NodeId) -> Self {
        let mut v = Self::zeros(n);
        v.0[x.index()] = 1.0;
        v
    }

    pub fn from_sparse(v: &SparseVector, n: usize) -> Self {
        DenseVector(v.to_dense(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn l1(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn to_sparse(&self) -> SparseVector {
        SparseVector::from_dense(&self.0)
    }
}

// Rows of the (possibly patched) matrix as (src, dst, weight) triples.
type ArcList = Vec<(usize, usize, f64)>;

fn arc_list(graph: &WeightedGraph) -> ArcList {
    (0..graph.num_nodes())
        .flat_map(|x| graph.arcs(NodeId(x)).map(move |(y, w)| (x, y.index(), w)))
        .collect()
}

fn patched_arc_list(graph: &WeightedGraph, u: &[f64]) -> ArcList {
    let mut arcs = arc_list(graph);
    for d in graph.dangling_nodes() {
        for (y, &w) in u.iter().enumerate() {
            if w > 0.0 {
                arcs.push((d.index(), y, w));
            }
        }
    }
    arcs
}

// w · M
fn left_multiply(arcs: &ArcList, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    for &(x, y, m) in arcs {
        out[y] += w[x] * m;
    }
    out
}

/// LU factorization of (*I* − α*M*)ᵀ, reusable for many preference vectors.
#[derive(Debug, Clone)]
pub struct DenseRanker {
    n: usize,
    alpha: f64,
    arcs: ArcList,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseRanker {
    pub fn new(graph: &WeightedGraph, alpha: f64) -> Result<Self, OracleError> {
        Self::from_arcs(graph.num_nodes(), arc_list(graph), alpha)
    }

    /// Ranker for the matrix obtained by replacing every zero row with `u`.
    pub fn patched(
        graph: &WeightedGraph,
        u: &DenseVector,
        alpha: f64,
    ) -> Result<Self, OracleError> {
        let n = graph.num_nodes();
        if u.len() != n {
            return Err(OracleError::DimensionMismatch {
                expected: n,
                found: u.len(),
            });
        }
        let norm = u.l1();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(OracleError::PatchNotDistribution(norm));
        }
        Self::from_arcs(n, patched_arc_list(graph, u.as_slice()), alpha)
    }

    fn from_arcs(n: usize, arcs: ArcList, alpha: f64) -> Result<Self, OracleError> {
        if n > ORACLE_MAX_NODES {
            return Err(OracleError::TooLarge {
                n,
                limit: ORACLE_MAX_NODES,
            });
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(OracleError::InvalidAlpha(alpha));
        }
        // a[y][x] = δ_xy − α m_xy
        let mut lu = vec![0.0; n * n];
        for i in 0..n {
            lu[i * n + i] = 1.0;
        }
        for &(x, y, m) in &arcs {
            lu[y * n + x] -= alpha * m;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap();
            if lu[pivot * n + k] == 0.0 {
                return Err(OracleError::Singular);
            }
            if pivot != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
            }
            let diag = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / diag;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(DenseRanker {
            n,
            alpha,
            arcs,
            lu,
            perm,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: f64 = row.iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// (1 − α) **v** (1 − α*M*)⁻¹ for a dense `v` (not necessarily a
    /// distribution, nor nonnegative).
    pub fn rank(&self, v: &[f64]) -> Result<Vec<f64>, OracleError> {
        if v.len() != self.n {
            return Err(OracleError::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let b: Vec<f64> = v.iter().map(|x| (1.0 - self.alpha) * x).collect();
        let mut w = self.solve(&b);
        // one step of iterative refinement on the sparse residual
        let wm = left_multiply(&self.arcs, &w);
        let residual: Vec<f64> = (0..self.n)
            .map(|i| b[i] - (w[i] - self.alpha * wm[i]))
            .collect();
        let correction = self.solve(&residual);
        for (wi, ci) in w.iter_mut().zip(correction) {
            *wi += ci;
        }
        Ok(w)
    }

    pub fn rank_sparse(&self, v: &SparseVector) -> Result<SparseVector, OracleError> {
        if let Some(max) = v.max_node() {
            if max.index() >= self.n {
                return Err(OracleError::DimensionMismatch {
                    expected: self.n,
                    found: max.index() + 1,
                });
            }
        }
        Ok(SparseVector::from_dense(&self.rank(&v.to_dense(self.n))?))
    }
}

/// (1 − α) **v** (1 − α*M*)⁻¹ by dense linear solve.
pub fn dense_rank(
    graph: &WeightedGraph,
    v: &DenseVector,
    alpha: f64,
) -> Result<DenseVector, OracleError> {
    Ok(DenseVector(
        DenseRanker::new(graph, alpha)?.rank(v.as_slice())?,
    ))
}

/// (1 − α) **v** ∑ₖ αᵏ *M*ᵏ, summed until the tail bound
/// ‖term‖₁ / (1 − α) falls below [`SERIES_TOLERANCE`].
pub fn dense_rank_series(
    graph: &WeightedGraph,
    v: &DenseVector,
    alpha: f64,
) -> Result<DenseVector, OracleError> {
    series(graph.num_nodes(), &arc_list(graph), v, alpha)
}

fn series(
    n: usize,
    arcs: &ArcList,
    v: &DenseVector,
    alpha: f64,
) -> Result<DenseVector, OracleError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(OracleError::InvalidAlpha(alpha));
    }
    if v.len() != n {
        return Err(OracleError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let mut term: Vec<f64> = v.0.iter().map(|x| (1.0 - alpha) * x).collect();
    let mut sum = term.clone();
    loop {
        let norm: f64 = term.iter().map(|x| x.abs()).sum();
        if norm / (1.0 - alpha) < SERIES_TOLERANCE {
            break;
        }
        term = left_multiply(arcs, &term);
        for t in &mut term {
            *t *= alpha;
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    Ok(DenseVector(sum))
}

/// Ranking of the patched matrix *P* (zero rows of *M* replaced by `u`) with
/// preference `v`.
pub fn dense_rank_patched(
    graph: &WeightedGraph,
    u: &DenseVector,
    v: &DenseVector,
    alpha: f64,
) -> Result<DenseVector, OracleError> {
    Ok(DenseVector(
        DenseRanker::patched(graph, u, alpha)?.rank(v.as_slice())?,
    ))
}

/// Series evaluation of [`dense_rank_patched`].
pub fn dense_rank_patched_series(
    graph: &WeightedGraph,
    u: &DenseVector,
    v: &DenseVector,
    alpha: f64,
) -> Result<DenseVector, OracleError> {
    series(
        graph.num_nodes(),
        &patched_arc_list(graph, u.as_slice()),
        v,
        alpha,
    )
}

/// Number of walks of length at most `t` leaving a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCount {
    pub count: u64,
    /// The count overflowed `u64` and is clamped to `u64::MAX`.
    pub saturated: bool,
}

/// The path function *P*ₓ(*t*): walks (vertices may repeat) of length
/// `0..=t` starting at `x`.
pub fn path_function(graph: &WeightedGraph, x: NodeId, t: usize) -> PathCount {
    let n = graph.num_nodes();
    let mut walks = vec![0u64; n];
    walks[x.index()] = 1;
    let mut total = 1u64;
    let mut saturated = false;
    for _ in 0..t {
        let mut next = vec![0u64; n];
        for (y, &count) in walks.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for (z, _) in graph.arcs(NodeId(y)) {
                let slot = &mut next[z.index()];
                let (v, overflow) = slot.overflowing_add(count);
                *slot = if overflow { u64::MAX } else { v };
                saturated |= overflow;
            }
        }
        for &c in &next {
            let (v, overflow) = total.overflowing_add(c);
            total = if overflow { u64::MAX } else { v };
            saturated |= overflow || c == u64::MAX;
        }
        walks = next;
    }
    PathCount {
        count: total,
        saturated,
    }
}
