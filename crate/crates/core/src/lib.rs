//! Spectral rankings of nonnegative substochastic matrices with the push
//! algorithm.
//!
//! The spectral ranking of a matrix *M* with `‖M‖₁ ≤ 1`, preference
//! distribution **v** and damping factor α ∈ [0, 1) is
//! (1 − α) **v** (1 − α*M*)⁻¹. When *M* is the natural walk of a graph this is
//! personalized PageRank (more precisely, the pseudorank).
//!
//! - [`graph`]: the immutable sparse matrix and its edge-list format.
//! - [`push`]: the push engine, with exact residual-based error bounds.
//! - [`hubs`]: runs with precomputed hub rankings, and the self-hub variant.
//! - [`patch`]: rankings with dangling rows patched by a distribution.
//! - [`oracle`]: dense reference computations.
//! - [`format`]: hub/patch/score files and the graph digest.
//!
//! ```
//! use pushrank::{push, EngineConfig, NodeId, SparseVector, WeightedGraph};
//!
//! let g = WeightedGraph::from_edge_list_str("0 1\n1 2\n2 0\n", false)?.natural_walk();
//! let v = SparseVector::singleton(NodeId(0), 1.0);
//! let result = push::run(&g, &v, EngineConfig::new(0.5, 1e-9))?;
//! assert!((result.p.get(NodeId(0)) - 4.0 / 7.0).abs() <= result.absolute_bound + 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod format;
pub mod generate;
pub mod graph;
pub mod hubs;
pub mod oracle;
pub mod patch;
pub mod push;
pub mod queue;
pub mod sparse;

pub use graph::{GraphError, NodeId, WeightedGraph};
pub use hubs::{finalize_hubs, run_with_hubs, self_hub_run, HubSet};
pub use oracle::{dense_rank, dense_rank_patched, path_function, DenseVector, OracleError};
pub use patch::{finalize_patch, run_with_patch};
pub use push::{run, Criterion, EngineConfig, PushState, PushStats, RankError, RankResult};
pub use queue::QueueKind;
pub use sparse::SparseVector;
