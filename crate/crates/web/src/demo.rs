//! The demo operations as plain functions over serializable types.

use pushrank::generate::{RandomGraph, Weights};
use pushrank::oracle::{DenseRanker, ORACLE_MAX_NODES};
use pushrank::{
    path_function, Criterion, EngineConfig, NodeId, PushState, QueueKind, RankError, SparseVector,
    WeightedGraph,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
pub struct GraphParams {
    pub nodes: usize,
    pub degree: usize,
    pub dangling: f64,
    pub seed: u64,
    /// Targets within this ring distance; 0 means anywhere.
    #[serde(default)]
    pub window: usize,
    #[serde(default)]
    pub weighted: bool,
}

#[derive(Debug, Serialize)]
pub struct GraphView {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize, f64)>,
    pub dangling: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RankParams {
    pub source: usize,
    pub alpha: f64,
    pub eps: f64,
    #[serde(default)]
    pub fifo: bool,
    #[serde(default)]
    pub absolute: bool,
}

#[derive(Debug, Serialize)]
pub struct RankView {
    /// `(node, score)`, best first.
    pub scores: Vec<(usize, f64)>,
    pub pushes: u64,
    pub arcs_traversed: u64,
    pub visited: usize,
    pub p_norm: f64,
    pub r_norm: f64,
    pub relative_bound: f64,
    /// ℓ₁ distance to the exact ranking, when the graph is small enough.
    pub oracle_distance: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TraceView {
    /// ‖r‖₁ after each push with the priority queue.
    pub priority: Vec<f64>,
    pub fifo: Vec<f64>,
    /// `(P_x(t), α^(t+1))` for small t.
    pub bound: Vec<(u64, f64)>,
}

pub fn generate(params: &GraphParams) -> WeightedGraph {
    let mut gen = RandomGraph::new(params.nodes.max(1), params.degree.max(1))
        .dangling(params.dangling.clamp(0.0, 1.0));
    if params.window > 0 {
        gen = gen.window(params.window);
    }
    if params.weighted {
        gen = gen.weights(Weights::Substochastic);
    }
    gen.sample(&mut StdRng::seed_from_u64(params.seed))
}

pub fn view(graph: &WeightedGraph) -> GraphView {
    let n = graph.num_nodes();
    let arcs = (0..n)
        .flat_map(|x| graph.arcs(NodeId(x)).map(move |(y, w)| (x, y.index(), w)))
        .collect();
    let dangling = graph.dangling_nodes().map(NodeId::index).collect();
    GraphView {
        nodes: n,
        arcs,
        dangling,
    }
}

fn config(params: &RankParams) -> EngineConfig {
    let queue = if params.fifo {
        QueueKind::Fifo
    } else {
        QueueKind::Priority
    };
    let criterion = if params.absolute {
        Criterion::AbsoluteResidual
    } else {
        Criterion::RelativeResidual
    };
    EngineConfig::new(params.alpha, params.eps)
        .with_queue(queue)
        .with_criterion(criterion)
}

fn source(graph: &WeightedGraph, x: usize) -> Result<SparseVector, RankError> {
    if x >= graph.num_nodes() {
        return Err(RankError::NodeOutOfRange {
            node: NodeId(x),
            n: graph.num_nodes(),
        });
    }
    Ok(SparseVector::singleton(NodeId(x), 1.0))
}

pub fn rank(graph: &WeightedGraph, params: &RankParams) -> Result<RankView, RankError> {
    let v = source(graph, params.source)?;
    let result = pushrank::run(graph, &v, config(params))?;
    let oracle_distance = if graph.num_nodes() <= ORACLE_MAX_NODES {
        DenseRanker::new(graph, params.alpha)
            .and_then(|r| r.rank(&v.to_dense(graph.num_nodes())))
            .ok()
            .map(|w| result.p.l1_distance_dense(&w))
    } else {
        None
    };
    Ok(RankView {
        scores: result
            .p
            .ranked()
            .into_iter()
            .map(|(x, s)| (x.index(), s))
            .collect(),
        pushes: result.stats.pushes,
        arcs_traversed: result.stats.arcs_traversed,
        visited: result.stats.visited,
        p_norm: result.p_norm,
        r_norm: result.r_norm,
        relative_bound: result.relative_bound,
        oracle_distance,
    })
}

fn residual_curve(
    graph: &WeightedGraph,
    v: &SparseVector,
    cfg: EngineConfig,
    limit: usize,
) -> Result<Vec<f64>, RankError> {
    let mut state = PushState::new(graph, v, cfg)?;
    let mut curve = vec![state.r_norm()];
    while curve.len() <= limit && state.step().is_some() {
        curve.push(state.r_norm());
    }
    Ok(curve)
}

/// Residual norm per push for both queues, against the α^(t+1) bound at
/// P_x(t) pushes.
pub fn trace(
    graph: &WeightedGraph,
    params: &RankParams,
    limit: usize,
) -> Result<TraceView, RankError> {
    let v = source(graph, params.source)?;
    let cfg = config(params).with_criterion(Criterion::AbsoluteResidual);
    let priority = residual_curve(graph, &v, cfg.with_queue(QueueKind::Priority), limit)?;
    let fifo = residual_curve(graph, &v, cfg.with_queue(QueueKind::Fifo), limit)?;
    let mut bound: Vec<(u64, f64)> = Vec::new();
    for t in 0.. {
        let pushes = path_function(graph, NodeId(params.source), t);
        if pushes.saturated || pushes.count as usize > limit {
            break;
        }
        // no walk leaves the source beyond this length
        if bound
            .last()
            .is_some_and(|&(count, _)| count == pushes.count)
        {
            break;
        }
        bound.push((pushes.count, params.alpha.powi(t as i32 + 1)));
    }
    Ok(TraceView {
        priority,
        fifo,
        bound,
    })
}
