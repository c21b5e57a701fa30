#![allow(dead_code)]

use pushrank::{NodeId, WeightedGraph};

/// Dense copy of the matrix, `m[x][y]`.
pub fn dense_matrix(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.num_nodes();
    let mut m = vec![vec![0.0; n]; n];
    for (x, row) in m.iter_mut().enumerate() {
        for (y, w) in g.arcs(NodeId(x)) {
            row[y.index()] = w;
        }
    }
    m
}

/// (1 − α) v Σ αᵏ Mᵏ by plain fixed-point iteration on the dense matrix,
/// w ← (1 − α) v + α w M, run for a fixed, generous number of rounds.
pub fn brute_rank(m: &[Vec<f64>], v: &[f64], alpha: f64) -> Vec<f64> {
    let n = v.len();
    let mut w: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
    let rounds = if alpha == 0.0 {
        1
    } else {
        (40.0 / -alpha.log10()).ceil() as usize + 10
    };
    for _ in 0..rounds {
        let mut next: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
        for x in 0..n {
            if w[x] != 0.0 {
                for y in 0..n {
                    next[y] += alpha * w[x] * m[x][y];
                }
            }
        }
        w = next;
    }
    w
}

/// Replaces each zero row by `u`.
pub fn patch_matrix(m: &[Vec<f64>], u: &[f64]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| {
            if row.iter().all(|&w| w == 0.0) {
                u.to_vec()
            } else {
                row.clone()
            }
        })
        .collect()
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
