//! The push algorithm for spectral rankings.
//!
//! For a substochastic matrix *M*, a preference distribution **v** and a
//! damping factor α ∈ [0, 1), the spectral ranking is
//!
//! > (1 − α) **v** (1 − α*M*)⁻¹ = (1 − α) **v** ∑ₖ αᵏ *M*ᵏ.
//!
//! A [`PushState`] holds an approximation **p** and a residual **r** such that
//!
//! > **p** + (1 − α) **r** (1 − α*M*)⁻¹ = (1 − α) **v** (1 − α*M*)⁻¹
//!
//! holds at all times. It starts from **p** = 0, **r** = **v**. A push on *x*
//! adds (1 − α) *r*ₓ to *p*ₓ, zeroes *r*ₓ and adds α *r*ₓ *m*ₓᵧ to every
//! successor *y*; this is the preference vector whose ranking is
//! (1 − α) *r*ₓ χₓ, so the invariant is preserved. No entry ever becomes
//! negative, hence ‖**p**‖₁ + ‖**r**‖₁ ≤ 1, and since
//! ‖(1 − α) **r** (1 − α*M*)⁻¹‖₁ ≤ ‖**r**‖₁ the residual norm is an exact bound
//! on the absolute ℓ₁ error. As **p** approaches the ranking from below,
//! ‖**r**‖₁ / ‖**p**‖₁ bounds the relative error.
//!
//! # Scheduling
//!
//! Only nodes whose residual exceeds a threshold are queued: ε‖**p**‖₁/*n* for
//! [`Criterion::RelativeResidual`] and ε/*n* for
//! [`Criterion::AbsoluteResidual`]. When no node passes, the residual norm is
//! at most ε‖**p**‖₁ (resp. ε). The queue is either an indirect max-heap on
//! residuals or a FIFO, see [`QueueKind`].
//!
//! Every vector is indexed by discovery order, so memory is proportional to the
//! number of visited nodes, not to the size of the graph.
//!
//! The same state machine also runs the hub, self-hub and dangling-patch
//! variants (see [`crate::hubs`] and [`crate::patch`]): those differ only in
//! which nodes may be queued, how the norms used for termination are computed,
//! and how the approximation is finalized.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::hubs::HubSet;
use crate::queue::{QueueKind, Scheduler};
use crate::sparse::SparseVector;

/// Slack allowed on `‖p‖₁ + ‖r‖₁ ≤ 1`.
pub const NORM_BUDGET_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum RankError {
    #[error("damping factor {0} outside [0, 1)")]
    InvalidAlpha(f64),
    #[error("tolerance {0} must be positive")]
    InvalidEpsilon(f64),
    #[error("preference vector is empty")]
    EmptyPreference,
    #[error("preference vector is not a distribution (ℓ₁ norm {0})")]
    NotDistribution(f64),
    #[error("node {node} outside [0, {n})")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("matrix is not substochastic (max row sum {0})")]
    NotSubstochastic(f64),
    #[error("node {0} has zero residual")]
    ZeroResidual(NodeId),
    #[error("node {0} is a hub and cannot be pushed")]
    BlockedNode(NodeId),
    #[error("hub vectors were computed for α = {hubs}, run uses α = {run}")]
    HubAlphaMismatch { hubs: f64, run: f64 },
    #[error("no ranking vector for hub {0}")]
    MissingHubVector(NodeId),
    #[error("patch distribution is not a distribution (ℓ₁ norm {0})")]
    PatchNotDistribution(f64),
    #[error("patched ranking vector is missing")]
    MissingPatchRanking,
    #[error("self-hub residual {0} is not below 1")]
    SelfHubDiverged(f64),
}

/// Termination rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Criterion {
    /// Stop when ‖r‖₁ ≤ ε.
    AbsoluteResidual,
    /// Stop when ‖r‖₁ / ‖p‖₁ ≤ ε.
    #[default]
    RelativeResidual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub alpha: f64,
    pub epsilon: f64,
    pub criterion: Criterion,
    pub queue: QueueKind,
    /// `None` means unlimited.
    pub max_pushes: Option<u64>,
}

impl EngineConfig {
    /// Relative criterion, priority queue, no push limit.
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        EngineConfig {
            alpha,
            epsilon,
            criterion: Criterion::RelativeResidual,
            queue: QueueKind::Priority,
            max_pushes: None,
        }
    }

    pub fn with_criterion(mut self, criterion: Criterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_queue(mut self, queue: QueueKind) -> Self {
        self.queue = queue;
        self
    }

    pub fn with_max_pushes(mut self, max_pushes: Option<u64>) -> Self {
        self.max_pushes = max_pushes;
        self
    }

    pub fn validate(&self) -> Result<(), RankError> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(RankError::InvalidAlpha(self.alpha));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 || self.epsilon.is_infinite() {
            return Err(RankError::InvalidEpsilon(self.epsilon));
        }
        Ok(())
    }

    /// Residual a node must strictly exceed to be pushed.
    pub fn push_threshold(&self, p_norm: f64, n: usize) -> f64 {
        match self.criterion {
            Criterion::RelativeResidual => self.epsilon * p_norm / n as f64,
            Criterion::AbsoluteResidual => self.epsilon / n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PushStats {
    pub pushes: u64,
    pub arcs_traversed: u64,
    pub queue_ops: u64,
    /// Distinct nodes that ever held a nonzero residual.
    pub visited: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    /// The (finalized) approximation.
    pub p: SparseVector,
    pub p_norm: f64,
    pub r_norm: f64,
    pub absolute_bound: f64,
    pub relative_bound: f64,
    pub stats: PushStats,
    /// The push limit was reached while pushable nodes remained.
    pub truncated: bool,
}

impl RankResult {
    fn new(p: SparseVector, p_norm: f64, r_norm: f64, stats: PushStats, truncated: bool) -> Self {
        let (absolute_bound, relative_bound) = bounds(p_norm, r_norm);
        RankResult {
            p,
            p_norm,
            r_norm,
            absolute_bound,
            relative_bound,
            stats,
            truncated,
        }
    }
}

fn bounds(p_norm: f64, r_norm: f64) -> (f64, f64) {
    let relative = if r_norm == 0.0 {
        0.0
    } else if p_norm > 0.0 {
        r_norm / p_norm
    } else {
        f64::INFINITY
    };
    (r_norm, relative)
}

/// Bijection between visited nodes and dense local indices, assigned at
/// first touch.
#[derive(Debug, Default)]
pub struct Discovery {
    index: HashMap<NodeId, u32>,
    nodes: Vec<NodeId>,
}

impl Discovery {
    pub fn local(&self, node: NodeId) -> Option<u32> {
        self.index.get(&node).copied()
    }

    pub fn node(&self, local: u32) -> NodeId {
        self.nodes[local as usize]
    }

    /// Visited nodes in discovery order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn get_or_insert(&mut self, node: NodeId) -> (u32, bool) {
        let next = self.nodes.len() as u32;
        match self.index.entry(node) {
            std::collections::hash_map::Entry::Occupied(e) => (*e.get(), false),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(next);
                self.nodes.push(node);
                (next, true)
            }
        }
    }
}

/// Sizes of the per-node storage of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Footprint {
    pub visited: usize,
    pub approximation_len: usize,
    pub residual_len: usize,
    pub queue_index_len: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Variant<'a> {
    Plain,
    Hubs(&'a HubSet),
    Patch { s: &'a SparseVector },
    SelfHub { node: NodeId, armed: bool },
}

/// The evolving `(p, r)` pair of a push run, with cached norms, queue and
/// statistics.
#[derive(Debug)]
pub struct PushState<'a> {
    graph: &'a WeightedGraph,
    cfg: EngineConfig,
    variant: Variant<'a>,
    discovery: Discovery,
    p: Vec<f64>,
    r: Vec<f64>,
    // Blocked nodes (hubs) hold residual but are never queued.
    blocked: Vec<bool>,
    p_norm: f64,
    // Residual mass on unblocked nodes.
    r_norm: f64,
    blocked_mass: f64,
    // Σ over hubs of r_h · ‖s_h‖₁.
    hub_gain: f64,
    theta: f64,
    queue: Scheduler,
    stats: PushStats,
}

impl<'a> PushState<'a> {
    /// `p = 0`, `r = v`, queue seeded with the support of `v`.
    pub fn new(
        graph: &'a WeightedGraph,
        v: &SparseVector,
        cfg: EngineConfig,
    ) -> Result<Self, RankError> {
        Self::with_variant(graph, v, cfg, Variant::Plain)
    }

    pub(crate) fn with_variant(
        graph: &'a WeightedGraph,
        v: &SparseVector,
        cfg: EngineConfig,
        variant: Variant<'a>,
    ) -> Result<Self, RankError> {
        cfg.validate()?;
        if !graph.is_substochastic() {
            return Err(RankError::NotSubstochastic(graph.max_row_sum()));
        }
        if v.is_empty() {
            return Err(RankError::EmptyPreference);
        }
        if !v.is_distribution() {
            return Err(RankError::NotDistribution(v.l1()));
        }
        if let Some(max) = v.max_node() {
            if max.index() >= graph.num_nodes() {
                return Err(RankError::NodeOutOfRange {
                    node: max,
                    n: graph.num_nodes(),
                });
            }
        }
        let mut state = PushState {
            graph,
            cfg,
            variant,
            discovery: Discovery::default(),
            p: Vec::new(),
            r: Vec::new(),
            blocked: Vec::new(),
            p_norm: 0.0,
            r_norm: 0.0,
            blocked_mass: 0.0,
            hub_gain: 0.0,
            theta: 0.0,
            queue: Scheduler::new(cfg.queue),
            stats: PushStats::default(),
        };
        let threshold = state.threshold();
        for (node, value) in v.iter() {
            let local = state.discover(node);
            state.deposit(local, node, value, threshold);
        }
        Ok(state)
    }

    fn discover(&mut self, node: NodeId) -> u32 {
        let (local, fresh) = self.discovery.get_or_insert(node);
        if fresh {
            self.p.push(0.0);
            self.r.push(0.0);
            let blocked = match self.variant {
                Variant::Hubs(hubs) => hubs.contains(node),
                _ => false,
            };
            self.blocked.push(blocked);
            self.stats.visited += 1;
        }
        local
    }

    // Adds residual to a node and notifies the queue.
    #[inline]
    fn deposit(&mut self, local: u32, node: NodeId, delta: f64, threshold: f64) {
        let l = local as usize;
        self.r[l] += delta;
        if self.blocked[l] {
            self.blocked_mass += delta;
            if let Variant::Hubs(hubs) = self.variant {
                self.hub_gain += delta * hubs.s_norm(node).unwrap_or(0.0);
            }
        } else {
            self.r_norm += delta;
            if (self.r[l] > threshold || self.queue.contains(local))
                && self.queue.offer(local, node, self.r[l])
            {
                self.stats.queue_ops += 1;
            }
        }
    }

    /// The current push threshold, computed on the (virtual) approximation
    /// norm used for termination.
    pub fn threshold(&self) -> f64 {
        self.cfg
            .push_threshold(self.virtual_p_norm(), self.graph.num_nodes())
    }

    /// Next node to push, or `None` when no queued node exceeds the
    /// threshold. The returned node has been removed from the queue.
    pub fn select_next(&mut self) -> Option<NodeId> {
        let threshold = self.threshold();
        match &mut self.queue {
            Scheduler::Priority(heap) => {
                let (_, _, key) = heap.peek()?;
                if key <= threshold {
                    return None;
                }
                let (_, node, _) = heap.pop()?;
                self.stats.queue_ops += 1;
                Some(node)
            }
            Scheduler::Fifo(fifo) => loop {
                let local = fifo.pop()?;
                self.stats.queue_ops += 1;
                if self.r[local as usize] > threshold {
                    return Some(self.discovery.node(local));
                }
            },
        }
    }

    /// Pushes `x`: moves `(1 − α) r_x` to `p_x` and spreads `α r_x m_xy` to
    /// the successors of `x`.
    pub fn push_once(&mut self, x: NodeId) -> Result<(), RankError> {
        let local = self.discovery.local(x).ok_or(RankError::ZeroResidual(x))?;
        let l = local as usize;
        let rx = self.r[l];
        if rx.is_nan() || rx <= 0.0 {
            return Err(RankError::ZeroResidual(x));
        }
        if self.blocked[l] {
            return Err(RankError::BlockedNode(x));
        }
        if self.queue.remove(local) {
            self.stats.queue_ops += 1;
        }
        let alpha = self.cfg.alpha;

        self.r[l] = 0.0;
        self.r_norm = (self.r_norm - rx).max(0.0);
        let gain = (1.0 - alpha) * rx;
        self.p[l] += gain;
        self.p_norm += gain;
        self.stats.pushes += 1;

        if let Variant::SelfHub { node, armed: false } = self.variant {
            if node == x {
                self.blocked[l] = true;
                self.variant = Variant::SelfHub { node, armed: true };
            }
        }

        let graph = self.graph;
        if let Variant::Patch { .. } = self.variant {
            if graph.is_dangling(x) {
                self.theta += alpha * rx;
                return Ok(());
            }
        }

        let threshold = self.threshold();
        self.stats.arcs_traversed += graph.outdegree(x) as u64;
        for (y, m) in graph.arcs(x) {
            let delta = alpha * rx * m;
            if delta > 0.0 {
                let ly = self.discover(y);
                self.deposit(ly, y, delta, threshold);
            }
        }
        Ok(())
    }

    /// `select_next` followed by `push_once`. Returns the pushed node.
    pub fn step(&mut self) -> Option<NodeId> {
        let x = self.select_next()?;
        self.push_once(x)
            .expect("queued nodes have positive residual");
        Some(x)
    }

    /// Pushes until no node passes the threshold or the push limit is hit.
    /// Returns `true` if the limit stopped the run early.
    pub fn run_to_completion(&mut self) -> bool {
        loop {
            if let Some(max) = self.cfg.max_pushes {
                if self.stats.pushes >= max {
                    return self.has_pending();
                }
            }
            if self.step().is_none() {
                return false;
            }
        }
    }

    /// Whether some queued node still exceeds the threshold.
    pub fn has_pending(&self) -> bool {
        let threshold = self.threshold();
        match &self.queue {
            Scheduler::Priority(heap) => heap.peek().is_some_and(|(_, _, key)| key > threshold),
            Scheduler::Fifo(fifo) => fifo.iter().any(|local| self.r[local as usize] > threshold),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &'a WeightedGraph {
        self.graph
    }

    pub fn stats(&self) -> PushStats {
        self.stats
    }

    pub fn discovery(&self) -> &Discovery {
        &self.discovery
    }

    /// Cached ‖p‖₁ of the raw approximation.
    pub fn p_norm(&self) -> f64 {
        self.p_norm
    }

    /// Cached ‖r′‖₁: residual mass on nodes that may still be pushed.
    pub fn r_norm(&self) -> f64 {
        self.r_norm
    }

    /// Residual mass parked on hub nodes.
    pub fn blocked_residual(&self) -> f64 {
        self.blocked_mass
    }

    /// Rank mass routed through dangling nodes (patched runs only).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Norm of the approximation the run converges to: ‖p‖₁ plus whatever
    /// is redeemed at finalization.
    pub fn virtual_p_norm(&self) -> f64 {
        match self.variant {
            Variant::Plain => self.p_norm,
            Variant::Hubs(_) => self.p_norm + self.hub_gain,
            Variant::Patch { s } => self.p_norm + self.theta * s.l1(),
            Variant::SelfHub { .. } => {
                if self.blocked_mass < 1.0 {
                    self.p_norm / (1.0 - self.blocked_mass)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `(absolute, relative)` error bounds for the finalized approximation.
    pub fn error_bounds(&self) -> (f64, f64) {
        let r_norm = match self.variant {
            Variant::SelfHub { .. } if self.blocked_mass < 1.0 => {
                self.r_norm / (1.0 - self.blocked_mass)
            }
            _ => self.r_norm,
        };
        bounds(self.virtual_p_norm(), r_norm)
    }

    /// Norms summed afresh from the stored vectors: `(‖p‖₁, ‖r′‖₁)`.
    pub fn recomputed_norms(&self) -> (f64, f64) {
        let p = self.p.iter().sum();
        let r = self
            .r
            .iter()
            .zip(&self.blocked)
            .filter(|(_, &b)| !b)
            .map(|(r, _)| r)
            .sum();
        (p, r)
    }

    fn collect(&self, values: &[f64]) -> SparseVector {
        self.discovery
            .nodes()
            .iter()
            .zip(values)
            .filter(|(_, &v)| v > 0.0)
            .map(|(&node, &v)| (node, v))
            .collect()
    }

    /// The raw approximation `p`.
    pub fn approximation(&self) -> SparseVector {
        self.collect(&self.p)
    }

    /// The full residual `r`, hub entries included.
    pub fn residual(&self) -> SparseVector {
        self.collect(&self.r)
    }

    pub fn residual_at(&self, node: NodeId) -> f64 {
        self.discovery
            .local(node)
            .map_or(0.0, |l| self.r[l as usize])
    }

    pub fn approximation_at(&self, node: NodeId) -> f64 {
        self.discovery
            .local(node)
            .map_or(0.0, |l| self.p[l as usize])
    }

    pub fn is_queued(&self, node: NodeId) -> bool {
        self.discovery
            .local(node)
            .is_some_and(|l| self.queue.contains(l))
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn queue_kind(&self) -> QueueKind {
        self.queue.kind()
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            visited: self.discovery.len(),
            approximation_len: self.p.len(),
            residual_len: self.r.len(),
            queue_index_len: self.queue.capacity_hint(),
        }
    }

    /// Finalized result for a plain run.
    pub fn into_result(self, truncated: bool) -> RankResult {
        RankResult::new(
            self.approximation(),
            self.p_norm,
            self.r_norm,
            self.stats,
            truncated,
        )
    }

    pub(crate) fn result_with(&self, p: SparseVector, p_norm: f64, truncated: bool) -> RankResult {
        let (absolute, _) = self.error_bounds();
        RankResult::new(p, p_norm, absolute, self.stats, truncated)
    }
}

/// Runs the push algorithm to termination.
pub fn run(
    graph: &WeightedGraph,
    v: &SparseVector,
    cfg: EngineConfig,
) -> Result<RankResult, RankError> {
    let mut state = PushState::new(graph, v, cfg)?;
    let truncated = state.run_to_completion();
    Ok(state.into_result(truncated))
}
