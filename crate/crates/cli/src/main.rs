use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, ValueEnum};
use serde::Serialize;

use ptas3ec::graph::parse_rational;
use ptas3ec::lab::{lab_on_graph, run_lab, LabOptions};
use ptas3ec::mortar::{build_mortar, designate_portals, extract_bricks, report, MortarOptions, MortarReport};
use ptas3ec::pipeline::default_eta;
use ptas3ec::slicing::{assign_artificial_terminals, dump, slice, SliceDump};
use ptas3ec::spanner::{build_spanner, SpannerStats};
use ptas3ec::{
    decompose, dp_solve, exact_solve, parse_graph, solve, write_solution, DecomposeOptions, DpOptions, EdgeId,
    EmbeddedMultigraph, Error, OracleOptions, OracleOutcome, PipelineConfig, RequirementMap, Stage, Weight,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Solve,
    Dp,
    Oracle,
    Lab,
    SpannerStats,
}

/// Planar relaxed {0,1,2,3}-edge-connectivity: approximation pipeline,
/// exact DP, oracle and structure checks.
#[derive(Parser, Debug)]
#[command(name = "ptas3ec", version)]
struct Cli {
    /// Graph file (required except for `--mode lab`).
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "solve")]
    mode: Mode,
    /// Accuracy, a rational in (0, 1) such as `1/2` or `0.25`.
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Copies allowed per edge.
    #[arg(long, default_value_t = 3)]
    k: u8,
    /// Portals per brick (default depends on epsilon).
    #[arg(long)]
    theta: Option<usize>,
    /// Dual BFS levels per slice (default depends on epsilon).
    #[arg(long)]
    eta: Option<usize>,
    /// Largest branch decomposition width handed to the DP.
    #[arg(long, default_value_t = 6)]
    width_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; `solve` writes `solution.txt` and `stats.json` there.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Also run the oracle in `solve` mode when the instance is small.
    #[arg(long)]
    oracle: bool,
    /// Node budget for the oracle.
    #[arg(long, default_value_t = 20_000_000)]
    node_budget: u64,
    /// Entries kept per DP node before giving up.
    #[arg(long, default_value_t = 200_000)]
    entry_budget: usize,
    /// Generated instances per theorem for `lab` without a graph file.
    #[arg(long, default_value_t = 500)]
    instances: usize,
}

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_BAD_INPUT: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::Disconnected(_) => EXIT_INFEASIBLE,
        Error::Budget(_) | Error::WidthCap { .. } | Error::SizeCap(_) | Error::TerminalCap { .. } => EXIT_BUDGET,
        Error::Parse { .. } | Error::InvalidEmbedding(_) | Error::InvalidQuery(_) | Error::NotAFace => EXIT_BAD_INPUT,
        _ => 1,
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(e) => exit_code(e),
            None => match err.downcast_ref::<ptas3ec::StageError>() {
                Some(s) => exit_code(&s.error),
                None => EXIT_BAD_INPUT,
            },
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), err: e.into() }
    }
}

fn config(cli: &Cli) -> Result<PipelineConfig, Failure> {
    let epsilon = parse_rational(&cli.epsilon)
        .ok_or_else(|| Error::InvalidQuery(format!("cannot parse epsilon `{}`", cli.epsilon)))?;
    let mut cfg = PipelineConfig::new(epsilon, cli.k);
    cfg.theta = cli.theta;
    cfg.eta = cli.eta;
    cfg.width_cap = cli.width_cap;
    cfg.seed = cli.seed;
    cfg.dp.entry_budget = cli.entry_budget;
    if cli.oracle {
        cfg.oracle = Some(oracle_options(cli));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn oracle_options(cli: &Cli) -> OracleOptions {
    OracleOptions { slot_cap: 120, node_budget: cli.node_budget }
}

fn load(path: Option<&Path>) -> Result<(EmbeddedMultigraph, RequirementMap), Failure> {
    let path = path.ok_or_else(|| Error::InvalidQuery("a graph file is required".into()))?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(|e| Failure {
        code: EXIT_BAD_INPUT,
        err: e,
    })?;
    Ok(parse_graph(&text)?)
}

fn emit(cli: &Cli, name: &str, value: &impl Serialize) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(value).map_err(|e| anyhow!(e))?;
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| anyhow!(e))?;
        fs::write(dir.join(name), format!("{json}\n")).map_err(|e| anyhow!(e))?;
    }
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{json}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(anyhow!(e).into()),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct SolutionJson {
    weight: Weight,
    k: u8,
    /// `(edge, copies)` for every edge in use.
    edges: Vec<(EdgeId, u8)>,
}

fn solution_json(g: &EmbeddedMultigraph, mult: &[u8], k: u8) -> SolutionJson {
    let edges: Vec<(EdgeId, u8)> = (0..mult.len()).filter(|&e| mult[e] > 0).map(|e| (e, mult[e])).collect();
    let weight = g.weight_of(edges.iter().flat_map(|&(e, c)| std::iter::repeat(e).take(c as usize)));
    SolutionJson { weight, k, edges }
}

#[derive(Serialize)]
struct SolveJson {
    mode: &'static str,
    solution: SolutionJson,
    stats: Option<ptas3ec::PipelineStats>,
}

fn cmd_solve(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    let (g, r) = load(cli.graph.as_deref())?;
    let out = solve(&g, &r, &cfg).map_err(|e| anyhow::Error::new(e))?;
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| anyhow!(e))?;
        fs::write(dir.join("solution.txt"), write_solution(&g, &out.solution)).map_err(|e| anyhow!(e))?;
    }
    let json = SolveJson { mode: "solve", solution: solution_json(&g, &out.solution.mult, cfg.k), stats: out.stats };
    emit(cli, "stats.json", &json)
}

#[derive(Serialize)]
struct DpJson {
    mode: &'static str,
    width: usize,
    solution: SolutionJson,
    stats: ptas3ec::dp::profile::DpStats,
}

fn cmd_dp(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    let (g, r) = load(cli.graph.as_deref())?;
    let bd = decompose(&g, DecomposeOptions { width_cap: cli.width_cap, seed: cli.seed, ..Default::default() })?;
    let res = dp_solve(&g, &r, cfg.k, &bd, DpOptions { entry_budget: cli.entry_budget, ..Default::default() })?;
    let json = DpJson { mode: "dp", width: bd.width, solution: solution_json(&g, &res.solution.mult, cfg.k), stats: res.stats };
    emit(cli, "dp.json", &json)
}

#[derive(Serialize)]
struct OracleJson {
    mode: &'static str,
    status: &'static str,
    nodes_explored: u64,
    solution: Option<SolutionJson>,
}

fn cmd_oracle(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    let (g, r) = load(cli.graph.as_deref())?;
    let outcome = exact_solve(&g, &r, cfg.k, oracle_options(cli))?;
    let (status, nodes, solution) = match &outcome {
        OracleOutcome::Optimal(o) => ("optimal", o.nodes_explored, Some(solution_json(&g, &o.solution.mult, cfg.k))),
        OracleOutcome::Infeasible { nodes_explored } => ("infeasible", *nodes_explored, None),
        OracleOutcome::Unknown { nodes_explored } => ("unknown", *nodes_explored, None),
    };
    emit(cli, "oracle.json", &OracleJson { mode: "oracle", status, nodes_explored: nodes, solution })?;
    match outcome {
        OracleOutcome::Optimal(_) => Ok(()),
        OracleOutcome::Infeasible { .. } => Err(Failure { code: EXIT_INFEASIBLE, err: anyhow!("instance is infeasible") }),
        OracleOutcome::Unknown { .. } => Err(Failure { code: EXIT_BUDGET, err: anyhow!("oracle node budget exhausted") }),
    }
}

fn cmd_lab(cli: &Cli) -> Result<(), Failure> {
    let report = match cli.graph.as_deref() {
        Some(_) => {
            let (g, r) = load(cli.graph.as_deref())?;
            if g.num_vertices() > ptas3ec::lab::CYCLE_VERTEX_CAP {
                return Err(Error::SizeCap(format!("lab checks need at most {} vertices", ptas3ec::lab::CYCLE_VERTEX_CAP)).into());
            }
            lab_on_graph(&g, &r, 200_000)?
        }
        None => run_lab(LabOptions { seed: cli.seed, instances: cli.instances, ..Default::default() }),
    };
    emit(cli, "lab.json", &report)
}

#[derive(Serialize)]
struct SpannerJson {
    mode: &'static str,
    theta: usize,
    eta: usize,
    mortar: MortarReport,
    spanner: SpannerStats,
    spanner_edges: Vec<EdgeId>,
    slicing_error: Option<String>,
    slices: Vec<SliceDump>,
}

fn cmd_spanner_stats(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    let (g, r) = load(cli.graph.as_deref())?;
    let theta = cfg.theta();
    let eta = cfg.eta.unwrap_or_else(|| default_eta(cfg.epsilon));
    let mg = build_mortar(&g, &r, MortarOptions::new(cfg.epsilon)).map_err(|e| stage(Stage::Mortar, e))?;
    let mut bricks = extract_bricks(&g, &mg.edges);
    for b in &mut bricks {
        designate_portals(&g, b, theta);
    }
    let mortar = report(&g, &r, &mg, &bricks, theta, cfg.epsilon);
    let sp = build_spanner(&g, &mg, &bricks, theta).map_err(|e| stage(Stage::Spanner, e))?;
    let sub = g.edge_subgraph(&sp.edges);
    let (slicing_error, slices) = match slice(&sub.graph, eta) {
        Ok(mut sl) => {
            assign_artificial_terminals(&sub.graph, &mut sl, &r)?;
            (None, dump(&sl, &sub.edge_map))
        }
        Err(e) => (Some(e.to_string()), Vec::new()),
    };
    let json = SpannerJson {
        mode: "spanner-stats",
        theta,
        eta,
        mortar,
        spanner_edges: sp.edge_list(),
        spanner: sp.stats,
        slicing_error,
        slices,
    };
    emit(cli, "spanner.json", &json)
}

fn stage(stage: Stage, error: Error) -> Failure {
    let code = exit_code(&error);
    Failure { code, err: ptas3ec::StageError { stage, error }.into() }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| anyhow!(e))?;
    }
    match cli.mode {
        Mode::Solve => cmd_solve(cli),
        Mode::Dp => cmd_dp(cli),
        Mode::Oracle => cmd_oracle(cli),
        Mode::Lab => cmd_lab(cli),
        Mode::SpannerStats => cmd_spanner_stats(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
