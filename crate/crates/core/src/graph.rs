//! Immutable sparse nonnegative matrices viewed as arc-weighted digraphs.
//!
//! A [`WeightedGraph`] stores the matrix *M* in compressed row-major form: an
//! offset array into packed target/weight arrays. Arcs of each node are sorted
//! by target, so iteration order is deterministic. Rows may be all zero
//! (dangling nodes). Algorithms that need *M* to be substochastic check
//! [`WeightedGraph::is_substochastic`] themselves; the graph type itself also
//! represents unnormalized inputs (e.g. an unweighted edge list before
//! [`WeightedGraph::natural_walk`]).

use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Absolute tolerance used for every "row sum ≤ 1" check.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// A node of a graph with `n` nodes: a dense index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(value: usize) -> Self {
        NodeId(value)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: f64 },
    #[error("line {line}: duplicate arc {src} -> {dst}")]
    DuplicateArc { line: usize, src: usize, dst: usize },
    #[error("arc {src} -> {dst}: invalid weight {weight}")]
    InvalidWeight { src: usize, dst: usize, weight: f64 },
    #[error("arc {src} -> {dst} references a node outside [0, {n})")]
    NodeOutOfRange { src: usize, dst: usize, n: usize },
    #[error("graph has no arcs")]
    NoArcs,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sparse nonnegative matrix in compressed row-major form.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    row_sums: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph from `(src, dst, weight)` triples.
    ///
    /// Zero-weight arcs are dropped. Negative or non-finite weights, ids
    /// outside `[0, n)` and repeated `(src, dst)` pairs are errors.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut arcs: Vec<(usize, usize, f64)> = arcs.into_iter().collect();
        for &(src, dst, weight) in &arcs {
            if src >= n || dst >= n {
                return Err(GraphError::NodeOutOfRange { src, dst, n });
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(GraphError::InvalidWeight { src, dst, weight });
            }
        }
        arcs.sort_by_key(|&(s, d, _)| (s, d));
        if let Some(w) = arcs
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(GraphError::DuplicateArc {
                line: 0,
                src: w[0].0,
                dst: w[0].1,
            });
        }
        Ok(Self::from_sorted(n, arcs.into_iter().filter(|a| a.2 > 0.0)))
    }

    // Arcs must be sorted by (src, dst), deduplicated, with positive weights.
    fn from_sorted(n: usize, arcs: impl Iterator<Item = (usize, usize, f64)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        for (src, dst, weight) in arcs {
            offsets[src + 1] += 1;
            targets.push(NodeId(dst));
            weights.push(weight);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let row_sums = (0..n)
            .map(|x| weights[offsets[x]..offsets[x + 1]].iter().sum())
            .collect();
        WeightedGraph {
            n,
            offsets,
            targets,
            weights,
            row_sums,
        }
    }

    /// Parses the edge-list text format: one arc per line, `src dst` or
    /// `src dst weight`, `#` comments, LF or CRLF line ends.
    ///
    /// With `weighted == false` every arc gets the placeholder weight 1 (a
    /// third field is still accepted and ignored). A comment of the form
    /// `# nodes <n>` declares the node count, which otherwise is one more
    /// than the largest id mentioned.
    pub fn from_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<Self, GraphError> {
        let mut arcs = Vec::new();
        let mut max_id: Option<usize> = None;
        let mut declared = 0usize;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                if let Some(count) = comment.trim().strip_prefix("nodes ") {
                    declared = count.trim().parse().map_err(|_| GraphError::Malformed {
                        line: lineno,
                        message: format!("bad node count {count:?}"),
                    })?;
                }
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(GraphError::Malformed {
                    line: lineno,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                });
            }
            let parse_id = |s: &str| {
                s.parse::<usize>().map_err(|_| GraphError::Malformed {
                    line: lineno,
                    message: format!("bad node id {s:?}"),
                })
            };
            let src = parse_id(fields[0])?;
            let dst = parse_id(fields[1])?;
            let weight = match (weighted, fields.get(2)) {
                (true, Some(w)) => {
                    let w: f64 = w.parse().map_err(|_| GraphError::Malformed {
                        line: lineno,
                        message: format!("bad weight {w:?}"),
                    })?;
                    if !w.is_finite() {
                        return Err(GraphError::Malformed {
                            line: lineno,
                            message: format!("non-finite weight {w}"),
                        });
                    }
                    if w < 0.0 {
                        return Err(GraphError::NegativeWeight {
                            line: lineno,
                            weight: w,
                        });
                    }
                    w
                }
                (true, None) => {
                    return Err(GraphError::Malformed {
                        line: lineno,
                        message: "missing weight".into(),
                    })
                }
                (false, _) => 1.0,
            };
            max_id = Some(max_id.unwrap_or(0).max(src).max(dst));
            arcs.push((src, dst, weight, lineno));
        }
        let n = declared.max(max_id.map_or(0, |m| m + 1));
        arcs.sort_by_key(|&(s, d, _, line)| (s, d, line));
        if let Some(w) = arcs
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(GraphError::DuplicateArc {
                line: w[1].3,
                src: w[1].0,
                dst: w[1].1,
            });
        }
        Ok(Self::from_sorted(
            n,
            arcs.into_iter()
                .filter(|a| a.2 > 0.0)
                .map(|(s, d, w, _)| (s, d, w)),
        ))
    }

    pub fn from_edge_list_str(text: &str, weighted: bool) -> Result<Self, GraphError> {
        Self::from_edge_list(text.as_bytes(), weighted)
    }

    /// Serializes to the weighted edge-list format. Weights are written in
    /// shortest round-trip form, so re-parsing yields an identical graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# nodes {}\n", self.n);
        for x in 0..self.n {
            for (y, w) in self.arcs(NodeId(x)) {
                out.push_str(&format!("{x} {y} {w}\n"));
            }
        }
        out
    }

    /// The transition matrix of the natural walk: each arc `x → y` gets
    /// weight `1/d⁺(x)`; dangling rows stay zero.
    pub fn natural_walk(&self) -> Self {
        let mut g = self.clone();
        for x in 0..self.n {
            let (lo, hi) = (self.offsets[x], self.offsets[x + 1]);
            let d = (hi - lo) as f64;
            for w in &mut g.weights[lo..hi] {
                *w = 1.0 / d;
            }
        }
        g.recompute_row_sums();
        g
    }

    /// Multiplies every weight by `1 / max_x rowsum(x)` so that `‖M‖₁ = 1`.
    ///
    /// Returns the scaled graph and the scale factor. The damping factor is
    /// not touched: ranking `(M, α)` is the same as ranking `(c·M, α/c)`, and
    /// adjusting α is up to the caller.
    pub fn normalize_unit_norm(&self) -> Result<(Self, f64), GraphError> {
        let max = self.max_row_sum();
        if self.targets.is_empty() || max <= 0.0 {
            return Err(GraphError::NoArcs);
        }
        let scale = 1.0 / max;
        let mut g = self.clone();
        if scale != 1.0 {
            for w in &mut g.weights {
                *w *= scale;
            }
            g.recompute_row_sums();
        }
        Ok((g, scale))
    }

    fn recompute_row_sums(&mut self) {
        for x in 0..self.n {
            self.row_sums[x] = self.weights[self.offsets[x]..self.offsets[x + 1]]
                .iter()
                .sum();
        }
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn outdegree(&self, x: NodeId) -> usize {
        self.offsets[x.0 + 1] - self.offsets[x.0]
    }

    /// Out-arcs of `x` as `(target, weight)`, sorted by target.
    #[inline]
    pub fn arcs(&self, x: NodeId) -> impl ExactSizeIterator<Item = (NodeId, f64)> + '_ {
        let range = self.offsets[x.0]..self.offsets[x.0 + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Weight of `x → y`, zero when absent.
    pub fn weight(&self, x: NodeId, y: NodeId) -> f64 {
        let range = self.offsets[x.0]..self.offsets[x.0 + 1];
        match self.targets[range.clone()].binary_search(&y) {
            Ok(i) => self.weights[range.start + i],
            Err(_) => 0.0,
        }
    }

    #[inline]
    pub fn row_sum(&self, x: NodeId) -> f64 {
        self.row_sums[x.0]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    #[inline]
    pub fn is_dangling(&self, x: NodeId) -> bool {
        self.outdegree(x) == 0
    }

    /// `‖M‖₁`, the largest row sum (rows are the ℓ₁ norm under the row-vector
    /// convention).
    pub fn max_row_sum(&self) -> f64 {
        self.row_sums.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_substochastic(&self) -> bool {
        self.max_row_sum() <= 1.0 + ROW_SUM_TOLERANCE
    }

    pub fn dangling_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n).map(NodeId).filter(|&x| self.is_dangling(x))
    }
}
