//! Rankings of the patched matrix *P*, where every zero row of *M* is
//! replaced by a distribution **u**, without materializing *P*.
//!
//! The run keeps a scalar θ for the rank mass that went through dangling
//! nodes. The invariant becomes
//!
//! > **p** + (1 − α)(**r** + θ**u**)(1 − α*P*)⁻¹ = (1 − α) **v** (1 − α*P*)⁻¹.
//!
//! Pushing a dangling node *x* moves (1 − α) *r*ₓ to **p**, zeroes *r*ₓ and
//! adds α *r*ₓ to θ; other pushes are unchanged. With **s** the ranking of *P*
//! under preference **u**, the approximation is **p** + θ**s**.

use crate::graph::WeightedGraph;
use crate::push::{EngineConfig, PushState, RankError, RankResult, Variant};
use crate::sparse::SparseVector;

/// `p + θ · s`.
pub fn patch_combination(p: &SparseVector, theta: f64, s: &SparseVector) -> SparseVector {
    let mut out = p.clone();
    out.add_scaled(s, theta);
    out
}

/// Starts a patched run without pushing.
///
/// `u` is only validated here: the run itself needs nothing but `s`, the
/// precomputed ranking `(1 − α) u (1 − αP)⁻¹`.
pub fn patch_state<'a>(
    graph: &'a WeightedGraph,
    v: &SparseVector,
    u: &SparseVector,
    cfg: EngineConfig,
    s: &'a SparseVector,
) -> Result<PushState<'a>, RankError> {
    if !u.is_distribution() {
        return Err(RankError::PatchNotDistribution(u.l1()));
    }
    let n = graph.num_nodes();
    for w in [u, s] {
        if let Some(max) = w.max_node() {
            if max.index() >= n {
                return Err(RankError::NodeOutOfRange { node: max, n });
            }
        }
    }
    if s.is_empty() {
        return Err(RankError::MissingPatchRanking);
    }
    PushState::with_variant(graph, v, cfg, Variant::Patch { s })
}

/// `p + θ s` for a patched state; `p` for any other state.
pub fn finalize_patch(state: &PushState<'_>, s: &SparseVector) -> SparseVector {
    patch_combination(&state.approximation(), state.theta(), s)
}

/// Ranking of the patched matrix with preference `v`.
pub fn run_with_patch(
    graph: &WeightedGraph,
    v: &SparseVector,
    u: &SparseVector,
    cfg: EngineConfig,
    s: &SparseVector,
) -> Result<RankResult, RankError> {
    let mut state = patch_state(graph, v, u, cfg, s)?;
    let truncated = state.run_to_completion();
    let p = finalize_patch(&state, s);
    Ok(state.result_with(p, state.virtual_p_norm(), truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;
    use crate::push::run;

    fn chi(x: usize) -> SparseVector {
        SparseVector::singleton(NodeId(x), 1.0)
    }

    fn pair(a: f64, b: f64) -> SparseVector {
        SparseVector::from_dense(&[a, b])
    }

    #[test]
    fn two_node_trace() {
        let g = WeightedGraph::from_arcs(2, [(0, 1, 1.0)]).unwrap();
        let u = pair(0.5, 0.5);
        let s = pair(0.4, 0.6);
        let cfg = EngineConfig::new(0.5, 1e-9);
        let mut state = patch_state(&g, &chi(0), &u, cfg, &s).unwrap();
        state.step();
        assert_eq!(state.approximation(), pair(0.5, 0.0));
        assert_eq!(state.residual(), pair(0.0, 0.5));
        state.step();
        assert_eq!(state.approximation(), pair(0.5, 0.25));
        assert_eq!(state.theta(), 0.25);
        assert!(state.step().is_none());
        let p = finalize_patch(&state, &s).to_dense(2);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.4).abs() < 1e-15);

        let r = run_with_patch(&g, &chi(0), &u, cfg, &s).unwrap();
        assert_eq!(r.p, finalize_patch(&state, &s));
        assert_eq!(r.r_norm, 0.0);
    }

    #[test]
    fn no_dangling_nodes_is_plain_run() {
        let g = WeightedGraph::from_arcs(3, [(0, 1, 1.0), (1, 2, 0.5), (1, 0, 0.5), (2, 0, 0.9)])
            .unwrap();
        let u = SparseVector::uniform(3);
        let s = SparseVector::uniform(3);
        let cfg = EngineConfig::new(0.85, 1e-10);
        let patched = run_with_patch(&g, &chi(0), &u, cfg, &s).unwrap();
        let plain = run(&g, &chi(0), cfg).unwrap();
        assert_eq!(patched, plain);
    }

    #[test]
    fn combination_examples() {
        let got = patch_combination(&pair(0.5, 0.25), 0.25, &pair(0.4, 0.6)).to_dense(2);
        assert!((got[0] - 0.6).abs() < 1e-15 && (got[1] - 0.4).abs() < 1e-15);
        assert_eq!(
            patch_combination(&pair(0.5, 0.25), 0.0, &pair(0.4, 0.6)),
            pair(0.5, 0.25)
        );
        assert_eq!(
            patch_combination(&SparseVector::new(), 1.0, &pair(0.4, 0.6)),
            pair(0.4, 0.6)
        );
    }

    #[test]
    fn patch_errors() {
        let g = WeightedGraph::from_arcs(2, [(0, 1, 1.0)]).unwrap();
        let cfg = EngineConfig::new(0.5, 1e-9);
        let s = pair(0.4, 0.6);
        assert_eq!(
            run_with_patch(&g, &chi(0), &pair(0.5, 0.2), cfg, &s).unwrap_err(),
            RankError::PatchNotDistribution(0.7)
        );
        assert_eq!(
            run_with_patch(&g, &chi(0), &pair(0.5, 0.5), cfg, &SparseVector::new()).unwrap_err(),
            RankError::MissingPatchRanking
        );
    }
}
