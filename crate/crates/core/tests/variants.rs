mod common;

use proptest::prelude::*;
use pushrank::generate::{random_preference, RandomGraph, Weights};
use pushrank::hubs::{hub_state, self_hub_state};
use pushrank::oracle::DenseRanker;
use pushrank::patch::patch_state;
use pushrank::{
    dense_rank, dense_rank_patched, finalize_hubs, finalize_patch, run, run_with_hubs,
    run_with_patch, self_hub_run, DenseVector, EngineConfig, HubSet, NodeId, SparseVector,
    WeightedGraph,
};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};

fn graph(rng: &mut StdRng, n: usize, dangling: f64) -> WeightedGraph {
    let weights = if rng.random::<bool>() {
        Weights::NaturalWalk
    } else {
        Weights::Substochastic
    };
    RandomGraph::new(n, 4)
        .dangling(dangling)
        .weights(weights)
        .sample(rng)
}

fn hubs_for(g: &WeightedGraph, rng: &mut StdRng, alpha: f64) -> HubSet {
    let n = g.num_nodes();
    let k = rng.random_range(0..=n / 4);
    let nodes: Vec<NodeId> = sample(rng, n, k).into_iter().map(NodeId).collect();
    HubSet::from_oracle(g, &nodes, alpha).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hub_runs_match_plain_runs(seed in any::<u64>(), n in 4usize..60, alpha in prop::sample::select(vec![0.5, 0.85])) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = graph(&mut rng, n, 0.1);
        let hubs = hubs_for(&g, &mut rng, alpha);
        let v = random_preference(n, 3, &mut rng);
        let cfg = EngineConfig::new(alpha, 1e-9);

        let plain = run(&g, &v, cfg).unwrap();
        let hubbed = run_with_hubs(&g, &v, cfg, &hubs).unwrap();
        prop_assert!(plain.p.l1_distance(&hubbed.p) <= 1e-8);
        let exact = dense_rank(&g, &DenseVector::from_sparse(&v, n), alpha).unwrap();
        prop_assert!(hubbed.p.l1_distance_dense(exact.as_slice()) <= hubbed.r_norm + 1e-11);

        // hubs never pushed, never queued; incremental ‖p′‖₁ is consistent
        let mut state = hub_state(&g, &v, cfg, &hubs).unwrap();
        while let Some(x) = state.step() {
            prop_assert!(!hubs.contains(x));
            for (h, _) in hubs.iter() {
                prop_assert!(!state.is_queued(h));
            }
        }
        let finalized = finalize_hubs(&state, &hubs);
        prop_assert!((state.virtual_p_norm() - finalized.recompute_l1()).abs() <= 1e-10);
    }

    #[test]
    fn patched_runs_match_materialized_patch(
        seed in any::<u64>(),
        n in 3usize..60,
        alpha in prop::sample::select(vec![0.25, 0.5, 0.85]),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = graph(&mut rng, n, 0.25);
        let u = random_preference(n, 1 + n / 3, &mut rng);
        let v = random_preference(n, 2, &mut rng);
        let u_dense = DenseVector::from_sparse(&u, n);
        let s = DenseRanker::patched(&g, &u_dense, alpha).unwrap().rank_sparse(&u).unwrap();
        let cfg = EngineConfig::new(alpha, 1e-7);

        let result = run_with_patch(&g, &v, &u, cfg, &s).unwrap();
        let exact = dense_rank_patched(&g, &u_dense, &DenseVector::from_sparse(&v, n), alpha).unwrap();
        prop_assert!(result.p.l1_distance_dense(exact.as_slice()) <= result.r_norm + 1e-12);

        // θ grows by exactly α r_x on dangling pushes and stays put otherwise
        let mut state = patch_state(&g, &v, &u, cfg, &s).unwrap();
        loop {
            let theta = state.theta();
            let Some(x) = state.select_next() else { break };
            let rx = state.residual_at(x);
            state.push_once(x).unwrap();
            if g.is_dangling(x) {
                prop_assert_eq!(state.theta(), theta + alpha * rx);
            } else {
                prop_assert_eq!(state.theta(), theta);
            }
        }
        prop_assert_eq!(finalize_patch(&state, &s), result.p);
    }

    #[test]
    fn pseudorank_normalizes_to_strongly_preferential_rank(seed in any::<u64>(), n in 3usize..50) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = RandomGraph::new(n, 3).dangling(0.3).sample(&mut rng);
        let v = random_preference(n, 3, &mut rng);
        let plain = run(&g, &v, EngineConfig::new(0.85, 1e-12)).unwrap();
        let normalized = plain.p.scaled(1.0 / plain.p.l1());
        let vd = DenseVector::from_sparse(&v, n);
        let patched = dense_rank_patched(&g, &vd, &vd, 0.85).unwrap();
        prop_assert!(normalized.l1_distance_dense(patched.as_slice()) <= 1e-8);
    }

    // Graphs where every cycle through the reachable set passes through the
    // source: the residual away from the source empties and the rescaled
    // self-hub run is exact.
    #[test]
    fn self_hub_is_exact_when_residual_empties(seed in any::<u64>(), n in 2usize..30, alpha in 0.1f64..0.95) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut arcs = Vec::new();
        for x in 0..n {
            let mut targets: Vec<usize> = (x + 1..n).filter(|_| rng.random_bool(0.3)).collect();
            if x > 0 && (targets.is_empty() || rng.random_bool(0.5)) {
                targets.push(0);
            }
            for &y in &targets {
                arcs.push((x, y, 1.0));
            }
        }
        let g = WeightedGraph::from_arcs(n, arcs).unwrap().natural_walk();
        let cfg = EngineConfig::new(alpha, 1e-3);
        let mut state = self_hub_state(&g, NodeId(0), cfg).unwrap();
        state.run_to_completion();
        prop_assume!(state.r_norm() == 0.0);
        let result = self_hub_run(&g, NodeId(0), cfg).unwrap();
        let exact = dense_rank(&g, &DenseVector::indicator(n, NodeId(0)), alpha).unwrap();
        prop_assert!(result.p.l1_distance_dense(exact.as_slice()) <= 1e-10);
    }
}

#[test]
fn self_hub_bounds_hold_in_general() {
    for seed in 0..30u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = graph(&mut rng, 40, 0.1);
        let x = NodeId(rng.random_range(0..40));
        let cfg = EngineConfig::new(0.85, 1e-6);
        let result = self_hub_run(&g, x, cfg).unwrap();
        let exact = dense_rank(&g, &DenseVector::indicator(40, x), 0.85).unwrap();
        let err = result.p.l1_distance_dense(exact.as_slice());
        assert!(
            err <= result.absolute_bound + 1e-12,
            "seed {seed}: {err:e} > {:e}",
            result.absolute_bound
        );
        assert!(result.relative_bound <= 1e-6 * (1.0 + 1e-12));
    }
}

#[test]
fn worked_two_cycle_self_hub() {
    let g = WeightedGraph::from_arcs(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
    let r = self_hub_run(&g, NodeId(0), EngineConfig::new(0.5, 1e-9)).unwrap();
    assert!(r.p.l1_distance_dense(&[2.0 / 3.0, 1.0 / 3.0]) <= 1e-15);
}

#[test]
fn worked_patch_example() {
    let g = WeightedGraph::from_arcs(2, [(0, 1, 1.0)]).unwrap();
    let u = SparseVector::from_dense(&[0.5, 0.5]);
    let s = SparseVector::from_dense(&[0.4, 0.6]);
    let v = SparseVector::singleton(NodeId(0), 1.0);
    let r = run_with_patch(&g, &v, &u, EngineConfig::new(0.5, 1e-9), &s).unwrap();
    assert!(r.p.l1_distance_dense(&[0.6, 0.4]) <= 1e-15);
}
