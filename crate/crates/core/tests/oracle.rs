mod common;

use common::{brute_rank, dense_matrix, l1, patch_matrix};
use proptest::prelude::*;
use pushrank::generate::{random_preference, RandomGraph, Weights};
use pushrank::oracle::{dense_rank_patched_series, dense_rank_series, DenseRanker};
use pushrank::{dense_rank, dense_rank_patched, path_function, DenseVector, NodeId, WeightedGraph};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn graph(seed: u64, n: usize, degree: usize, dangling: f64, weighted: bool) -> WeightedGraph {
    let weights = if weighted {
        Weights::Substochastic
    } else {
        Weights::NaturalWalk
    };
    RandomGraph::new(n, degree)
        .dangling(dangling)
        .weights(weights)
        .sample(&mut StdRng::seed_from_u64(seed))
}

// Frozen worked values, each re-derived here by brute-force iteration.
#[test]
fn worked_values_match_brute_force() {
    let chain = WeightedGraph::from_arcs(2, [(0, 1, 1.0)]).unwrap();
    let cycle = WeightedGraph::from_arcs(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
    let two_cycle = WeightedGraph::from_arcs(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap();

    let e0 = |n| DenseVector::indicator(n, NodeId(0));
    let cases: Vec<(&WeightedGraph, Vec<f64>)> = vec![
        (&chain, vec![0.5, 0.25]),
        (&cycle, vec![4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]),
        (&two_cycle, vec![2.0 / 3.0, 1.0 / 3.0]),
    ];
    for (g, expected) in cases {
        let n = g.num_nodes();
        let brute = brute_rank(&dense_matrix(g), e0(n).as_slice(), 0.5);
        assert!(l1(&brute, &expected) < 1e-14, "{brute:?}");
        let solved = dense_rank(g, &e0(n), 0.5).unwrap();
        assert!(solved.l1_distance(&expected) < 1e-14);
    }

    let u = [0.5, 0.5];
    let p = patch_matrix(&dense_matrix(&chain), &u);
    assert!(l1(&brute_rank(&p, &[1.0, 0.0], 0.5), &[0.6, 0.4]) < 1e-14);
    assert!(l1(&brute_rank(&p, &u, 0.5), &[0.4, 0.6]) < 1e-14);
    let patched = dense_rank_patched(&chain, &DenseVector(u.to_vec()), &e0(2), 0.5).unwrap();
    assert!(patched.l1_distance(&[0.6, 0.4]) < 1e-14);
}

#[test]
fn solve_and_series_agree_on_random_graphs() {
    for seed in 0..40u64 {
        let n = 5 + (seed as usize * 7) % 96;
        let g = graph(seed, n, 1 + seed as usize % 8, 0.1, seed % 2 == 0);
        let mut rng = StdRng::seed_from_u64(seed + 1000);
        let v = DenseVector::from_sparse(&random_preference(n, 1 + seed as usize % 5, &mut rng), n);
        for alpha in [0.25, 0.5, 0.85, 0.99] {
            let a = dense_rank(&g, &v, alpha).unwrap();
            let b = dense_rank_series(&g, &v, alpha).unwrap();
            let worst =
                a.0.iter()
                    .zip(&b.0)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
            assert!(worst <= 1e-12, "seed {seed} α {alpha}: {worst:e}");
        }
    }
}

#[test]
fn brute_force_agrees_with_solver() {
    for seed in 0..10u64 {
        let g = graph(seed, 30, 4, 0.2, seed % 2 == 1);
        let v = DenseVector::from_sparse(
            &random_preference(30, 3, &mut StdRng::seed_from_u64(seed)),
            30,
        );
        let expected = brute_rank(&dense_matrix(&g), v.as_slice(), 0.85);
        assert!(dense_rank(&g, &v, 0.85).unwrap().l1_distance(&expected) < 1e-12);
    }
}

#[test]
fn patched_solve_and_series_agree() {
    for seed in 0..20u64 {
        let n = 10 + seed as usize * 4;
        let g = graph(seed, n, 3, 0.25, seed % 2 == 0);
        let mut rng = StdRng::seed_from_u64(seed);
        let u = DenseVector::from_sparse(&random_preference(n, n / 2, &mut rng), n);
        let v = DenseVector::from_sparse(&random_preference(n, 2, &mut rng), n);
        let a = dense_rank_patched(&g, &u, &v, 0.85).unwrap();
        let b = dense_rank_patched_series(&g, &u, &v, 0.85).unwrap();
        assert!(a.l1_distance(b.as_slice()) <= 1e-11);
        let brute = brute_rank(
            &patch_matrix(&dense_matrix(&g), u.as_slice()),
            v.as_slice(),
            0.85,
        );
        assert!(a.l1_distance(&brute) <= 1e-11);
    }
}

fn walks_brute_force(g: &WeightedGraph, x: NodeId, t: usize) -> u64 {
    // depth-first enumeration of every walk
    fn count(g: &WeightedGraph, x: NodeId, left: usize) -> u64 {
        1 + if left == 0 {
            0
        } else {
            g.arcs(x).map(|(y, _)| count(g, y, left - 1)).sum()
        }
    }
    count(g, x, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linearity(seed in any::<u64>(), a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let g = graph(seed, 40, 4, 0.15, true);
        let mut rng = StdRng::seed_from_u64(seed);
        let v1 = random_preference(40, 4, &mut rng).to_dense(40);
        let v2 = random_preference(40, 6, &mut rng).to_dense(40);
        let ranker = DenseRanker::new(&g, 0.85).unwrap();
        let combined: Vec<f64> = v1.iter().zip(&v2).map(|(x, y)| a * x + b * y).collect();
        let lhs = ranker.rank(&combined).unwrap();
        let r1 = ranker.rank(&v1).unwrap();
        let r2 = ranker.rank(&v2).unwrap();
        for i in 0..40 {
            prop_assert!((lhs[i] - (a * r1[i] + b * r2[i])).abs() <= 1e-12);
        }
    }

    #[test]
    fn inverse_problem_round_trip(seed in any::<u64>(), alpha in 0.05f64..0.95) {
        let g = graph(seed, 30, 3, 0.1, seed % 2 == 0);
        let mut rng = StdRng::seed_from_u64(seed ^ 0xabc);
        let w = random_preference(30, 10, &mut rng).to_dense(30);
        // v̂ = w (I − αM) / (1 − α)
        let m = dense_matrix(&g);
        let v_hat: Vec<f64> = (0..30)
            .map(|y| (w[y] - alpha * (0..30).map(|x| w[x] * m[x][y]).sum::<f64>()) / (1.0 - alpha))
            .collect();
        let back = DenseRanker::new(&g, alpha).unwrap().rank(&v_hat).unwrap();
        prop_assert!(l1(&back, &w) <= 1e-10);
    }

    #[test]
    fn rank_norm_never_exceeds_preference_norm(seed in any::<u64>(), alpha in 0.0f64..0.99) {
        let g = graph(seed, 25, 3, 0.2, seed % 3 == 0);
        let v = DenseVector::from_sparse(&random_preference(25, 3, &mut StdRng::seed_from_u64(seed)), 25);
        let w = dense_rank(&g, &v, alpha).unwrap();
        prop_assert!(w.l1() <= 1.0 + 1e-12);
    }

    #[test]
    fn stochastic_graphs_preserve_norm(seed in any::<u64>(), alpha in 0.0f64..0.99) {
        // natural walk, no dangling nodes: every row is stochastic
        let g = graph(seed, 25, 3, 0.0, false);
        let v = DenseVector::from_sparse(&random_preference(25, 3, &mut StdRng::seed_from_u64(seed)), 25);
        prop_assert!((dense_rank(&g, &v, alpha).unwrap().l1() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn path_function_recurrence(seed in any::<u64>(), n in 1usize..20, x in 0usize..20) {
        let g = graph(seed, n, 2, 0.2, false);
        let x = NodeId(x % n);
        let mut previous = 0;
        for t in 0..=5 {
            let p = path_function(&g, x, t);
            prop_assert!(!p.saturated);
            prop_assert_eq!(p.count, walks_brute_force(&g, x, t));
            prop_assert!(p.count >= previous);
            previous = p.count;
            if t < 5 {
                let next = path_function(&g, x, t + 1).count;
                let via_successors: u64 = g.arcs(x).map(|(y, _)| path_function(&g, y, t).count).sum();
                prop_assert_eq!(next, 1 + via_successors);
            }
        }
    }
}
