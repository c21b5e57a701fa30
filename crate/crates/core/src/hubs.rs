//! Push runs with precomputed hub rankings.
//!
//! If the ranking **s**ₓ = (1 − α) χₓ (1 − α*M*)⁻¹ of every node *x* in a set
//! *H* is known, the residual mass reaching *H* never needs to be pushed: with
//! **r′** equal to **r** zeroed on *H* and **p′** = **p** + ∑ₓ∈H *r*ₓ **s**ₓ, the
//! push invariant holds for `(p′, r′)`. Hubs are therefore never queued,
//! termination looks at ‖**r′**‖₁ and ‖**p′**‖₁ = ‖**p**‖₁ + ∑ₓ∈H *r*ₓ‖**s**ₓ‖₁,
//! and **p′** is assembled at the end.
//!
//! [`self_hub_run`] applies the same idea to the source itself: after its
//! first push the source behaves as a hub whose (unknown) ranking is the one
//! being computed, and the result is rescaled by 1/(1 − *r*ₓ).

use std::collections::BTreeMap;

use crate::graph::{NodeId, WeightedGraph};
use crate::oracle::{DenseRanker, OracleError};
use crate::push::{EngineConfig, PushState, RankError, RankResult, Variant};
use crate::sparse::SparseVector;

#[derive(Debug, Clone, PartialEq)]
pub struct HubVector {
    pub s: SparseVector,
    pub s_norm: f64,
}

/// Hub nodes with their precomputed spectral rankings, for a fixed α.
#[derive(Debug, Clone, PartialEq)]
pub struct HubSet {
    alpha: f64,
    hubs: BTreeMap<NodeId, HubVector>,
}

impl HubSet {
    pub fn new(alpha: f64) -> Self {
        HubSet {
            alpha,
            hubs: BTreeMap::new(),
        }
    }

    /// Registers the ranking of `node`. An empty vector cannot be the
    /// ranking of any node and is rejected.
    pub fn insert(&mut self, node: NodeId, s: SparseVector) -> Result<(), RankError> {
        if s.is_empty() {
            return Err(RankError::MissingHubVector(node));
        }
        let s_norm = s.l1();
        self.hubs.insert(node, HubVector { s, s_norm });
        Ok(())
    }

    /// Computes hub rankings with the dense oracle.
    pub fn from_oracle(
        graph: &WeightedGraph,
        nodes: &[NodeId],
        alpha: f64,
    ) -> Result<Self, OracleError> {
        let ranker = DenseRanker::new(graph, alpha)?;
        let mut set = HubSet::new(alpha);
        for &x in nodes {
            let s = ranker.rank_sparse(&SparseVector::singleton(x, 1.0))?;
            set.insert(x, s).map_err(|_| OracleError::Singular)?;
        }
        Ok(set)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.hubs.contains_key(&node)
    }

    pub fn get(&self, node: NodeId) -> Option<&HubVector> {
        self.hubs.get(&node)
    }

    pub fn s_norm(&self, node: NodeId) -> Option<f64> {
        self.hubs.get(&node).map(|h| h.s_norm)
    }

    pub fn len(&self) -> usize {
        self.hubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hubs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &HubVector)> {
        self.hubs.iter().map(|(&k, v)| (k, v))
    }

    fn check(&self, graph: &WeightedGraph, cfg: &EngineConfig) -> Result<(), RankError> {
        if self.alpha != cfg.alpha {
            return Err(RankError::HubAlphaMismatch {
                hubs: self.alpha,
                run: cfg.alpha,
            });
        }
        let n = graph.num_nodes();
        for (node, hub) in self.iter() {
            if node.index() >= n {
                return Err(RankError::NodeOutOfRange { node, n });
            }
            if let Some(max) = hub.s.max_node() {
                if max.index() >= n {
                    return Err(RankError::NodeOutOfRange { node: max, n });
                }
            }
        }
        Ok(())
    }
}

/// `p + Σ_{x∈H} r_x · s_x`.
pub fn hub_combination(p: &SparseVector, r: &SparseVector, hubs: &HubSet) -> SparseVector {
    let mut out = p.clone();
    for (node, rx) in r.iter() {
        if let Some(hub) = hubs.get(node) {
            out.add_scaled(&hub.s, rx);
        }
    }
    out
}

/// Assembles **p′** from a state run with `hubs`.
pub fn finalize_hubs(state: &PushState<'_>, hubs: &HubSet) -> SparseVector {
    hub_combination(&state.approximation(), &state.residual(), hubs)
}

/// Starts a hub run without pushing; drive it with [`PushState::step`].
pub fn hub_state<'a>(
    graph: &'a WeightedGraph,
    v: &SparseVector,
    cfg: EngineConfig,
    hubs: &'a HubSet,
) -> Result<PushState<'a>, RankError> {
    hubs.check(graph, &cfg)?;
    PushState::with_variant(graph, v, cfg, Variant::Hubs(hubs))
}

/// Push run in which the nodes of `hubs` are never queued. The returned
/// approximation is the finalized **p′**; `r_norm` is ‖**r′**‖₁.
pub fn run_with_hubs(
    graph: &WeightedGraph,
    v: &SparseVector,
    cfg: EngineConfig,
    hubs: &HubSet,
) -> Result<RankResult, RankError> {
    let mut state = hub_state(graph, v, cfg, hubs)?;
    let truncated = state.run_to_completion();
    let p = finalize_hubs(&state, hubs);
    Ok(state.result_with(p, state.virtual_p_norm(), truncated))
}

/// Starts a self-hub run from `x` without pushing.
pub fn self_hub_state(
    graph: &WeightedGraph,
    x: NodeId,
    cfg: EngineConfig,
) -> Result<PushState<'_>, RankError> {
    let v = SparseVector::singleton(x, 1.0);
    PushState::with_variant(
        graph,
        &v,
        cfg,
        Variant::SelfHub {
            node: x,
            armed: false,
        },
    )
}

/// Ranking of χₓ where `x` is pushed once and then treated as a hub of
/// itself. At termination the approximation is divided by `1 − r_x`, with
/// `r_x` the residual parked at `x`.
///
/// The reported residual norm excludes `r_x` and is divided by `1 − r_x` as
/// well, so it bounds the error of the rescaled vector.
pub fn self_hub_run(
    graph: &WeightedGraph,
    x: NodeId,
    cfg: EngineConfig,
) -> Result<RankResult, RankError> {
    let mut state = self_hub_state(graph, x, cfg)?;
    let truncated = state.run_to_completion();
    let rx = state.blocked_residual();
    if rx >= 1.0 {
        return Err(RankError::SelfHubDiverged(rx));
    }
    let scale = 1.0 / (1.0 - rx);
    let p = state.approximation().scaled(scale);
    Ok(state.result_with(p, state.p_norm() * scale, truncated))
}
