use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use pushrank::format::{
    parse_hub_file, parse_patch_file, write_hub_file, write_patch_file, write_scores,
};
use pushrank::oracle::DenseRanker;
use pushrank::{
    run, run_with_hubs, run_with_patch, self_hub_run, Criterion, DenseVector, EngineConfig, HubSet,
    NodeId, QueueKind, RankResult, SparseVector, WeightedGraph,
};

use crate::error::CliError;
use crate::input::{
    load_distribution, load_graph, load_preference, parse_node_list, read, GraphArgs, LoadedGraph,
    PreferenceArgs,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QueueArg {
    Priority,
    Fifo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CriterionArg {
    Abs,
    Rel,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub pref: PreferenceArgs,
    /// Damping factor in [0, 1)
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    /// Tolerance of the termination criterion
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "priority")]
    pub queue: QueueArg,
    #[arg(long, value_enum, default_value = "rel")]
    pub criterion: CriterionArg,
    /// Hub file produced by `hubs precompute`
    #[arg(long, value_name = "FILE")]
    pub hubs: Option<PathBuf>,
    /// Patch distribution for dangling nodes (file or `uniform`)
    #[arg(long, value_name = "FILE", requires = "patch_s")]
    pub patch_u: Option<String>,
    /// Patch file produced by `patch precompute`
    #[arg(long, value_name = "FILE", requires = "patch_u")]
    pub patch_s: Option<PathBuf>,
    /// Treat the source as a hub of itself after its first push
    #[arg(long, conflicts_with_all = ["hubs", "patch_u"])]
    pub self_hub: bool,
    /// Print counters and error bounds to stderr
    #[arg(long)]
    pub stats: bool,
    /// Stop after this many pushes (exit 3 if work remains)
    #[arg(long)]
    pub max_pushes: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub pref: PreferenceArgs,
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    /// Rank the patched matrix, zero rows replaced by this distribution
    #[arg(long, value_name = "FILE")]
    pub patch_u: Option<String>,
}

#[derive(Debug, Args)]
pub struct HubsPrecomputeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    /// Comma-separated hub node ids
    #[arg(long, value_name = "LIST")]
    pub nodes: String,
    /// Output file (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PatchPrecomputeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    /// Patch distribution (file or `uniform`)
    #[arg(long, value_name = "FILE")]
    pub u: String,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Floating-point slack on `distance ≤ bound` in `compare`.
const COMPARE_SLACK: f64 = 1e-12;

enum Strategy {
    Plain,
    Hubs(HubSet),
    Patch { u: SparseVector, s: SparseVector },
    SelfHub(NodeId),
}

pub struct RunReport {
    pub result: RankResult,
    pub wall_time: Duration,
    pub config: EngineConfig,
    pub digest: String,
}

impl RunReport {
    fn describe(&self) -> String {
        let r = &self.result;
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "graph\t{}", self.digest);
        let _ = writeln!(s, "alpha\t{}\neps\t{}", c.alpha, c.epsilon);
        let _ = writeln!(s, "criterion\t{:?}\nqueue\t{:?}", c.criterion, c.queue);
        let _ = writeln!(s, "pushes\t{}", r.stats.pushes);
        let _ = writeln!(s, "arcs\t{}", r.stats.arcs_traversed);
        let _ = writeln!(s, "queue_ops\t{}", r.stats.queue_ops);
        let _ = writeln!(s, "visited\t{}", r.stats.visited);
        let _ = writeln!(s, "p_norm\t{}\nr_norm\t{}", r.p_norm, r.r_norm);
        let _ = writeln!(s, "absolute_bound\t{}", r.absolute_bound);
        let _ = writeln!(s, "relative_bound\t{}", r.relative_bound);
        let _ = writeln!(s, "truncated\t{}", r.truncated);
        let _ = writeln!(s, "wall_ms\t{:.3}", self.wall_time.as_secs_f64() * 1e3);
        s
    }
}

fn engine_config(args: &RankArgs) -> EngineConfig {
    let criterion = match args.criterion {
        CriterionArg::Abs => Criterion::AbsoluteResidual,
        CriterionArg::Rel => Criterion::RelativeResidual,
    };
    let queue = match args.queue {
        QueueArg::Priority => QueueKind::Priority,
        QueueArg::Fifo => QueueKind::Fifo,
    };
    EngineConfig::new(args.alpha, args.eps)
        .with_criterion(criterion)
        .with_queue(queue)
        .with_max_pushes(args.max_pushes)
}

fn format_error(path: &Path) -> impl FnOnce(pushrank::format::FormatError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.to_path_buf(),
        source,
    }
}

fn strategy(args: &RankArgs, loaded: &LoadedGraph) -> Result<Strategy, CliError> {
    let n = loaded.graph.num_nodes();
    if args.hubs.is_some() && args.patch_u.is_some() {
        return Err(CliError::Usage(
            "--hubs cannot be combined with --patch-u".into(),
        ));
    }
    if let Some(path) = &args.hubs {
        let file = parse_hub_file(&read(path)?).map_err(format_error(path))?;
        file.verify(&loaded.digest, args.alpha)
            .map_err(format_error(path))?;
        return Ok(Strategy::Hubs(file.hubs));
    }
    if let (Some(u), Some(path)) = (&args.patch_u, &args.patch_s) {
        let u = load_distribution(u, n, "patch distribution")?;
        let file = parse_patch_file(&read(path)?).map_err(format_error(path))?;
        file.verify(&loaded.digest, args.alpha)
            .map_err(format_error(path))?;
        return Ok(Strategy::Patch { u, s: file.s });
    }
    if args.self_hub {
        return match args.pref.source {
            Some(x) => Ok(Strategy::SelfHub(NodeId(x))),
            None => Err(CliError::Usage("--self-hub needs --source".into())),
        };
    }
    Ok(Strategy::Plain)
}

fn execute(
    g: &WeightedGraph,
    v: &SparseVector,
    cfg: EngineConfig,
    strategy: &Strategy,
) -> Result<RankResult, CliError> {
    let result = match strategy {
        Strategy::Plain => run(g, v, cfg)?,
        Strategy::Hubs(hubs) => run_with_hubs(g, v, cfg, hubs)?,
        Strategy::Patch { u, s } => run_with_patch(g, v, u, cfg, s)?,
        Strategy::SelfHub(x) => self_hub_run(g, *x, cfg)?,
    };
    Ok(result)
}

fn report(
    args: &RankArgs,
    loaded: &LoadedGraph,
) -> Result<(RunReport, Strategy, SparseVector), CliError> {
    let n = loaded.graph.num_nodes();
    let v = load_preference(&args.pref, n)?;
    let strategy = strategy(args, loaded)?;
    let config = engine_config(args);
    let start = Instant::now();
    let result = execute(&loaded.graph, &v, config, &strategy)?;
    let wall_time = start.elapsed();
    let report = RunReport {
        result,
        wall_time,
        config,
        digest: loaded.digest.clone(),
    };
    Ok((report, strategy, v))
}

pub fn rank(args: &RankArgs) -> Result<String, CliError> {
    let loaded = load_graph(&args.graph)?;
    let (report, _, _) = report(args, &loaded)?;
    if args.stats {
        eprint!("{}", report.describe());
    }
    let out = write_scores(&report.result.p);
    if report.result.truncated {
        print!("{out}");
        eprintln!("error bound after truncation: {}", report.result.r_norm);
        return Err(CliError::Truncated);
    }
    Ok(out)
}

fn dense_target(
    g: &WeightedGraph,
    v: &SparseVector,
    patch_u: Option<&SparseVector>,
    alpha: f64,
) -> Result<DenseVector, CliError> {
    let n = g.num_nodes();
    let ranker = match patch_u {
        Some(u) => DenseRanker::patched(g, &DenseVector::from_sparse(u, n), alpha)?,
        None => DenseRanker::new(g, alpha)?,
    };
    Ok(DenseVector(ranker.rank(&v.to_dense(n))?))
}

pub fn oracle(args: &OracleArgs) -> Result<String, CliError> {
    let loaded = load_graph(&args.graph)?;
    let n = loaded.graph.num_nodes();
    let v = load_preference(&args.pref, n)?;
    let u = match &args.patch_u {
        Some(arg) => Some(load_distribution(arg, n, "patch distribution")?),
        None => None,
    };
    let w = dense_target(&loaded.graph, &v, u.as_ref(), args.alpha)?;
    Ok(write_scores(&w.to_sparse()))
}

pub fn compare(args: &RankArgs) -> Result<String, CliError> {
    let loaded = load_graph(&args.graph)?;
    let (report, strategy, v) = report(args, &loaded)?;
    if args.stats {
        eprint!("{}", report.describe());
    }
    let u = match &strategy {
        Strategy::Patch { u, .. } => Some(u),
        _ => None,
    };
    let exact = dense_target(&loaded.graph, &v, u, args.alpha)?;
    let result = &report.result;
    let distance = result.p.l1_distance_dense(exact.as_slice());
    let pass = distance <= result.r_norm + COMPARE_SLACK;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let out = format!(
        "distance\t{distance}\nbound\t{}\n{verdict}\n",
        result.r_norm
    );
    if !pass {
        print!("{out}");
        return Err(CliError::CompareFailed);
    }
    if result.truncated {
        print!("{out}");
        return Err(CliError::Truncated);
    }
    Ok(out)
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String, CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn hubs_precompute(args: &HubsPrecomputeArgs) -> Result<String, CliError> {
    let loaded = load_graph(&args.graph)?;
    let nodes = parse_node_list(&args.nodes, loaded.graph.num_nodes())?;
    if nodes.is_empty() {
        return Err(CliError::Usage("--nodes lists no hub".into()));
    }
    let hubs = HubSet::from_oracle(&loaded.graph, &nodes, args.alpha)?;
    emit(&args.out, write_hub_file(&hubs, &loaded.digest))
}

pub fn patch_precompute(args: &PatchPrecomputeArgs) -> Result<String, CliError> {
    let loaded = load_graph(&args.graph)?;
    let n = loaded.graph.num_nodes();
    let u = load_distribution(&args.u, n, "patch distribution")?;
    let s = dense_target(&loaded.graph, &u, Some(&u), args.alpha)?.to_sparse();
    emit(&args.out, write_patch_file(&s, args.alpha, &loaded.digest))
}
