//! Seeded random graphs and preference vectors for tests, benchmarks and the
//! demo.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{NodeId, WeightedGraph};
use crate::sparse::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    /// `1/d⁺(x)` on every arc.
    NaturalWalk,
    /// Random positive weights, random row sums in `[0.3, 1]`, then rescaled
    /// so that the largest row sum is exactly 1.
    Substochastic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraph {
    pub nodes: usize,
    /// Mean outdegree of non-dangling nodes; degrees are uniform in
    /// `1..=2·mean − 1`.
    pub mean_degree: usize,
    /// Fraction of nodes forced to be dangling.
    pub dangling_fraction: f64,
    pub weights: Weights,
    /// If set, targets of `x` are drawn from the ring window
    /// `x − w ..= x + w` (mod n) instead of the whole graph.
    pub window: Option<usize>,
}

impl RandomGraph {
    pub fn new(nodes: usize, mean_degree: usize) -> Self {
        RandomGraph {
            nodes,
            mean_degree,
            dangling_fraction: 0.0,
            weights: Weights::NaturalWalk,
            window: None,
        }
    }

    pub fn dangling(mut self, fraction: f64) -> Self {
        self.dangling_fraction = fraction;
        self
    }

    pub fn weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    pub fn window(mut self, window: usize) -> Self {
        self.window = Some(window);
        self
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightedGraph {
        let n = self.nodes;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let dangling_count = ((self.dangling_fraction * n as f64).ceil() as usize).min(n);
        let mut is_dangling = vec![false; n];
        for &x in &order[..dangling_count] {
            is_dangling[x] = true;
        }
        let span = match self.window {
            Some(w) => (2 * w + 1).min(n),
            None => n,
        };
        let max_degree = (2 * self.mean_degree.max(1) - 1).min(span);
        let mut arcs = Vec::new();
        for (x, &dangling) in is_dangling.iter().enumerate() {
            if dangling {
                continue;
            }
            let degree = rng.random_range(1..=max_degree);
            let targets: Vec<usize> = sample(rng, span, degree)
                .into_iter()
                .map(|k| match self.window {
                    Some(w) if span < n => (x + n - w + k) % n,
                    _ => k,
                })
                .collect();
            match self.weights {
                Weights::NaturalWalk => {
                    arcs.extend(targets.into_iter().map(|y| (x, y, 1.0)));
                }
                Weights::Substochastic => {
                    let raw: Vec<f64> = targets
                        .iter()
                        .map(|_| rng.random_range(0.05..1.0))
                        .collect();
                    let total: f64 = raw.iter().sum();
                    let row_sum = rng.random_range(0.3..=1.0);
                    arcs.extend(
                        targets
                            .into_iter()
                            .zip(raw)
                            .map(|(y, w)| (x, y, w * row_sum / total)),
                    );
                }
            }
        }
        let g = WeightedGraph::from_arcs(n, arcs).expect("generated arcs are valid");
        match self.weights {
            Weights::NaturalWalk => g.natural_walk(),
            Weights::Substochastic if g.num_arcs() > 0 => g.normalize_unit_norm().unwrap().0,
            Weights::Substochastic => g,
        }
    }
}

/// A distribution supported on `support` distinct random nodes, with random
/// positive weights.
pub fn random_preference<R: Rng + ?Sized>(n: usize, support: usize, rng: &mut R) -> SparseVector {
    let nodes = sample(rng, n, support.clamp(1, n));
    let raw: Vec<(NodeId, f64)> = nodes
        .into_iter()
        .map(|x| (NodeId(x), rng.random_range(0.1..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|e| e.1).sum();
    let v: SparseVector = raw.into_iter().map(|(x, w)| (x, w / total)).collect();
    // renormalizing again absorbs the rounding of the first division
    v.normalized().map(|(v, _)| v).unwrap_or(v)
}
