use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use pushrank::format::{graph_digest, parse_vector};
use pushrank::{NodeId, SparseVector, WeightedGraph};

use crate::error::CliError;

/// Relative change above which renormalizing a preference file is reported.
const RENORMALIZE_WARNING: f64 = 1e-9;

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list: `src dst [weight]` per line
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Replace weights by 1/outdegree
    #[arg(long)]
    pub natural_walk: bool,
    /// Scale weights so the largest row sum is 1 (α is left as given)
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct PreferenceArgs {
    /// Rank the indicator of this node
    #[arg(long, value_name = "NODE", conflicts_with = "pref")]
    pub source: Option<usize>,
    /// Preference file (`node<TAB>weight`) or `uniform`
    #[arg(long, value_name = "FILE")]
    pub pref: Option<String>,
}

pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub digest: String,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Arcs carry their listed weights if any line has a third field; otherwise
/// every arc starts at weight 1.
fn has_weights(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .any(|l| l.split_whitespace().count() >= 3)
}

pub fn load_graph(args: &GraphArgs) -> Result<LoadedGraph, CliError> {
    let text = read(&args.graph)?;
    let graph_err = |source| CliError::Graph {
        path: args.graph.clone(),
        source,
    };
    let weighted = has_weights(&text) && !args.natural_walk;
    let mut graph = WeightedGraph::from_edge_list_str(&text, weighted).map_err(graph_err)?;
    if args.natural_walk {
        graph = graph.natural_walk();
    }
    if args.normalize {
        let (scaled, scale) = graph.normalize_unit_norm().map_err(graph_err)?;
        eprintln!("normalize: weights scaled by {scale}; alpha unchanged");
        graph = scaled;
    }
    let digest = graph_digest(&graph);
    Ok(LoadedGraph { graph, digest })
}

fn check_range(v: &SparseVector, n: usize, what: &str) -> Result<(), CliError> {
    match v.max_node() {
        Some(x) if x.index() >= n => Err(CliError::Input(format!(
            "{what}: node {x} outside [0, {n})"
        ))),
        _ => Ok(()),
    }
}

/// Reads a distribution: `uniform` or a TSV file, renormalized to ℓ₁ = 1.
pub fn load_distribution(arg: &str, n: usize, what: &str) -> Result<SparseVector, CliError> {
    if arg == "uniform" {
        return Ok(SparseVector::uniform(n));
    }
    let path = Path::new(arg);
    let raw = parse_vector(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    check_range(&raw, n, what)?;
    let (v, change) = raw
        .normalized()
        .ok_or_else(|| CliError::Input(format!("{what}: {arg} has no positive entries")))?;
    if change > RENORMALIZE_WARNING {
        eprintln!("warning: {what} renormalized (ℓ₁ norm was {})", raw.l1());
    }
    Ok(v)
}

pub fn load_preference(args: &PreferenceArgs, n: usize) -> Result<SparseVector, CliError> {
    match (args.source, &args.pref) {
        (Some(x), None) => {
            if x >= n {
                return Err(CliError::Usage(format!("--source {x} outside [0, {n})")));
            }
            Ok(SparseVector::singleton(NodeId(x), 1.0))
        }
        (None, Some(arg)) => load_distribution(arg, n, "preference"),
        _ => Err(CliError::Usage(
            "exactly one of --source and --pref is required".into(),
        )),
    }
}

pub fn parse_node_list(list: &str, n: usize) -> Result<Vec<NodeId>, CliError> {
    let mut nodes = Vec::new();
    for field in list.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let x: usize = field
            .parse()
            .map_err(|_| CliError::Usage(format!("bad node id {field:?}")))?;
        if x >= n {
            return Err(CliError::Usage(format!("node {x} outside [0, {n})")));
        }
        nodes.push(NodeId(x));
    }
    nodes.sort();
    nodes.dedup();
    Ok(nodes)
}
