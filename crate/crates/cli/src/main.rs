use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};

use tts_core::bounds::{all_lower_bounds, best_lower_bound};
use tts_core::dynamics::{default_max_steps, run_model_to_limit, Configuration, Model};
use tts_core::exact::ilp::{emit_ilp, min_tts_via_ilp, IlpError, RowFamily};
use tts_core::exact::{min_dtts_exact, min_ts_exact, min_tts_exact, DEFAULT_DTTS_CAP, DEFAULT_TS_CAP, DEFAULT_TTS_CAP};
use tts_core::experiment::{experiment_real, experiment_synthetic, synthetic_csv, RandomModel, SyntheticConfig};
use tts_core::generators as gens;
use tts_core::graph::{Graph, NodeId, Thresholds};
use tts_core::greedy::{ts_greedy, tts_greedy};
use tts_core::io::{
    format_edge_list, format_schedule, format_thresholds, parse_schedule, read_edge_list, read_text, write_text,
    FormatError, LabeledGraph, ThresholdRule,
};
use tts_core::schedule::{verify_tts, Schedule};
use tts_core::transforms::{bipartite_double_cover, hardness_gadget};
use tts_core::tree::{construct_tts_tree, min_tts_tree_size};

#[derive(Parser)]
#[command(name = "tts", version, about = "Timed target sets in non-progressive threshold models")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph as an edge list
    Gen(GenArgs),
    /// Run the threshold dynamics from an initial configuration
    Simulate(SimulateArgs),
    /// Check a schedule file against a graph
    Verify(VerifyArgs),
    /// Greedy timed target set (or target set with --ts)
    Greedy(GreedyArgs),
    /// Minimum timed, disjoint timed or plain target set
    Exact(ExactArgs),
    /// Exact minimum timed target set of a tree
    Tree(TreeArgs),
    /// Lower bounds on the minimum timed target set size
    Bounds(InstanceArgs),
    /// Build the double cover or the hardness gadget graph
    Transform(TransformArgs),
    /// Write the ILP model for a fixed horizon in LP format
    IlpExport(IlpExportArgs),
    /// Greedy versus optimum experiments
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge list file
    #[arg(long)]
    graph: PathBuf,
    /// strict, simple or file:<path>
    #[arg(long, default_value = "strict")]
    rule: ThresholdRule,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Star,
    Path,
    Cycle,
    Complete,
    Bipartite,
    Tower,
    Ba,
    Er,
    Tree,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Part sizes for `bipartite`
    #[arg(long, default_value_t = 2)]
    a: usize,
    #[arg(long, default_value_t = 4)]
    b: usize,
    #[arg(long, default_value_t = 3)]
    kappa: usize,
    /// BA attachment count (default from --avg-degree)
    #[arg(long)]
    m_attach: Option<usize>,
    /// ER edge probability (default from --avg-degree)
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 8.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write thresholds under this rule to the given file
    #[arg(long, value_name = "PATH")]
    tau_out: Option<PathBuf>,
    #[arg(long, default_value = "strict")]
    rule: ThresholdRule,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Progressive,
    NonProgressive,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Progressive => Model::Progressive,
            ModelArg::NonProgressive => Model::NonProgressive,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Initially positive labels, comma or space separated
    #[arg(long, default_value = "")]
    init: String,
    #[arg(long, value_enum, default_value = "non-progressive")]
    model: ModelArg,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Print every configuration up to the first repeat
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Schedule file (`i: labels` per line)
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct GreedyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Plain target set greedy instead
    #[arg(long)]
    ts: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Tts,
    Dtts,
    Ts,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "tts")]
    variant: Variant,
    /// Model for `--variant ts`
    #[arg(long, value_enum, default_value = "non-progressive")]
    model: ModelArg,
    #[arg(long)]
    node_cap: Option<usize>,
    /// Solve through the ILP k-sweep with this MILP command instead
    #[arg(long)]
    solver_cmd: Option<String>,
    #[arg(long, default_value_t = 8)]
    k_max: usize,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Also build and print an optimal schedule
    #[arg(long)]
    schedule: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "which")]
struct TransformWhich {
    #[arg(long)]
    double_cover: bool,
    #[arg(long)]
    hardness_gadget: bool,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    which: TransformWhich,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_tau: PathBuf,
}

#[derive(Args)]
struct IlpExportArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    k: usize,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Random BA/ER graphs: greedy and optimum sizes as CSV
    Synthetic(SyntheticArgs),
    /// Both greedy algorithms on an edge list
    Real(RealArgs),
}

#[derive(Args)]
struct SyntheticArgs {
    #[arg(long, default_value = "BA")]
    model: RandomModel,
    /// Node counts, comma separated
    #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 20)]
    node_cap: usize,
    #[arg(long)]
    solver_cmd: Option<String>,
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave wall_ms empty so output is reproducible byte for byte
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct RealArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long, default_value = "strict")]
    rule: ThresholdRule,
}

/// Exit status 1 for domain errors, 2 for I/O and usage errors.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn domain(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn io(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        io(e)
    }
}

type Outcome = Result<String, Failure>;

fn load(args: &InstanceArgs) -> Result<(LabeledGraph, Thresholds), Failure> {
    let g = read_edge_list(&args.graph)?;
    let tau = args.rule.apply(&g)?;
    tau.validate(&g.graph).map_err(domain)?;
    Ok((g, tau))
}

/// Re-verifies before printing.
fn show_schedule(g: &LabeledGraph, tau: &Thresholds, sched: &Schedule, what: &str) -> Outcome {
    verify_tts(&g.graph, tau, sched).map_err(|r| domain(anyhow!("internal error: {what} schedule rejected: {r}")))?;
    Ok(format!("{}{what} size={}\n", format_schedule(sched, &g.labels), sched.size()))
}

fn show_set(g: &LabeledGraph, s: &[NodeId], what: &str) -> String {
    let labels: Vec<&str> = s.iter().map(|&v| g.labels[v].as_str()).collect();
    format!("{}\n{what} size={}\n", labels.join(" "), s.len())
}

fn emit(out: &Option<PathBuf>, text: String) -> Outcome {
    match out {
        Some(path) => {
            write_text(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_gen(a: &GenArgs) -> Outcome {
    let (graph, params) = match a.family {
        Family::Star => (gens::gen_star(a.n), format!("n={}", a.n)),
        Family::Path => (gens::gen_path(a.n), format!("n={}", a.n)),
        Family::Cycle => (gens::gen_cycle(a.n), format!("n={}", a.n)),
        Family::Complete => (gens::gen_complete(a.n), format!("n={}", a.n)),
        Family::Bipartite => (gens::gen_complete_bipartite(a.a, a.b), format!("a={} b={}", a.a, a.b)),
        Family::Tower => (gens::gen_tower(a.kappa).map(|t| t.graph), format!("kappa={}", a.kappa)),
        Family::Ba => {
            let m = a.m_attach.unwrap_or_else(|| gens::ba_attach_for_degree(a.avg_degree));
            (gens::gen_ba(a.n, m, a.seed), format!("n={} m_attach={m} seed={}", a.n, a.seed))
        }
        Family::Er => {
            let p = a.p.unwrap_or_else(|| gens::er_probability_for_degree(a.n, a.avg_degree));
            (gens::gen_er(a.n, p, a.seed), format!("n={} p={p} seed={}", a.n, a.seed))
        }
        Family::Tree => (gens::gen_random_tree(a.n, a.seed), format!("n={} seed={}", a.n, a.seed)),
    };
    let graph = graph.map_err(domain)?;
    let name = a.family.to_possible_value().expect("no skipped variants").get_name().to_string();
    let g = LabeledGraph::numbered(graph);
    if let Some(path) = &a.tau_out {
        let tau = a.rule.apply(&g)?;
        write_text(path, &format_thresholds(&tau, &g.labels))?;
    }
    emit(&a.out, format_edge_list(&g, &[format!("generator {name} {params}")]))
}

fn cmd_simulate(a: &SimulateArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    let index = g.index();
    let n = g.graph.node_count();
    let mut conf = Configuration::empty(n);
    for label in a.init.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let &v = index.get(label).ok_or_else(|| io(anyhow!("unknown node {label}")))?;
        conf.insert(v);
    }
    let max_steps = a.max_steps.unwrap_or_else(|| default_max_steps(&g.graph));
    let orbit = run_model_to_limit(&g.graph, &tau, &conf, a.model.into(), max_steps, a.trace).map_err(domain)?;
    let mut out = String::new();
    if let Some(trace) = &orbit.trace {
        for (t, c) in trace.iter().enumerate() {
            let labels: Vec<&str> = c.nodes().map(|v| g.labels[v].as_str()).collect();
            let _ = writeln!(out, "{t}: {}", labels.join(" "));
        }
    }
    let _ = writeln!(out, "transient={}", orbit.transient_length);
    let _ = writeln!(out, "cycle={}", orbit.cycle_length);
    let _ = writeln!(out, "all_positive={}", orbit.saw_all_positive);
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    let sched = parse_schedule(&read_text(&a.schedule)?, &g)?;
    match verify_tts(&g.graph, &tau, &sched) {
        Ok(_) => Ok(format!("TTS size={}\n", sched.size())),
        Err(r) => Err(domain(anyhow!("not a timed target set: {r}"))),
    }
}

fn cmd_greedy(a: &GreedyArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    if a.ts {
        let s = ts_greedy(&g.graph, &tau).map_err(domain)?;
        return Ok(show_set(&g, &s, "TS"));
    }
    let sched = tts_greedy(&g.graph, &tau).map_err(domain)?;
    show_schedule(&g, &tau, &sched, "TTS")
}

fn cmd_exact(a: &ExactArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    if let Some(cmd) = &a.solver_cmd {
        if !matches!(a.variant, Variant::Tts) {
            return Err(io(anyhow!("--solver-cmd supports only --variant tts")));
        }
        let (_, sched) = min_tts_via_ilp(&g.graph, &tau, a.k_max, cmd).map_err(|e| match e {
            IlpError::Unavailable(_) | IlpError::Io(_) => io(e),
            e => domain(e),
        })?;
        return show_schedule(&g, &tau, &sched, "TTS");
    }
    match a.variant {
        Variant::Tts => {
            let (_, sched) = min_tts_exact(&g.graph, &tau, a.node_cap.unwrap_or(DEFAULT_TTS_CAP)).map_err(domain)?;
            show_schedule(&g, &tau, &sched, "TTS")
        }
        Variant::Dtts => {
            let (_, sched) = min_dtts_exact(&g.graph, &tau, a.node_cap.unwrap_or(DEFAULT_DTTS_CAP)).map_err(domain)?;
            show_schedule(&g, &tau, &sched, "DTTS")
        }
        Variant::Ts => {
            let cap = a.node_cap.unwrap_or(DEFAULT_TS_CAP);
            let (_, s) = min_ts_exact(&g.graph, &tau, a.model.into(), cap).map_err(domain)?;
            Ok(show_set(&g, &s, "TS"))
        }
    }
}

fn cmd_tree(a: &TreeArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    let size = min_tts_tree_size(&g.graph, &tau).map_err(domain)?;
    if !a.schedule {
        return Ok(format!("TTS size={size}\n"));
    }
    let sched = construct_tts_tree(&g.graph, &tau).map_err(domain)?;
    if sched.size() != size {
        return Err(domain(anyhow!("internal error: built schedule has size {} (expected {size})", sched.size())));
    }
    show_schedule(&g, &tau, &sched, "TTS")
}

fn cmd_bounds(a: &InstanceArgs) -> Outcome {
    let (g, tau) = load(a)?;
    let mut out = String::new();
    for (kind, value) in all_lower_bounds(&g.graph, &tau) {
        match value {
            Ok(v) => writeln!(out, "{kind}: {v}"),
            Err(e) => writeln!(out, "{kind}: not applicable ({e})"),
        }
        .unwrap();
    }
    let (value, kind) = best_lower_bound(&g.graph, &tau);
    let _ = writeln!(out, "best: {value} ({kind})");
    Ok(out)
}

fn write_pair(graph: Graph, tau: &Thresholds, header: Vec<String>, out_graph: &Path, out_tau: &Path) -> Outcome {
    let g = LabeledGraph::numbered(graph);
    write_text(out_graph, &format_edge_list(&g, &header))?;
    write_text(out_tau, &format_thresholds(tau, &g.labels))?;
    Ok(format!("nodes={} edges={}\n", g.graph.node_count(), g.graph.edge_count()))
}

fn cmd_transform(a: &TransformArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    let n = g.graph.node_count();
    if a.which.double_cover {
        let c = bipartite_double_cover(&g.graph, &tau).map_err(domain)?;
        let mut header = vec![format!("double cover: input node i maps to x=i and y={n}+i")];
        header.extend(g.labels.iter().enumerate().map(|(i, l)| format!("input {l} -> x {} y {}", c.x[i], c.y[i])));
        write_pair(c.graph, &c.thresholds, header, &a.out_graph, &a.out_tau)
    } else {
        let h = hardness_gadget(&g.graph, &tau).map_err(domain)?;
        let mut header = vec![format!("hardness gadget: input node i keeps id i (0..{n})")];
        header.extend(h.gadgets.iter().map(|t| format!("gadget {} {} on {}", t.pair.0, t.pair.1, t.host)));
        write_pair(h.graph, &h.thresholds, header, &a.out_graph, &a.out_tau)
    }
}

fn cmd_ilp_export(a: &IlpExportArgs) -> Outcome {
    let (g, tau) = load(&a.instance)?;
    let model = emit_ilp(&g.graph, &tau, a.k);
    let text = model.to_lp_string();
    let summary = format!(
        "variables={} rows={} (activation={} support={} final={} overlap={}) fixed={}\n",
        model.variable_count(),
        model.rows.len(),
        model.count_rows(RowFamily::Activation),
        model.count_rows(RowFamily::Support),
        model.count_rows(RowFamily::Final),
        model.count_rows(RowFamily::Overlap),
        model.fixed_zero.len()
    );
    match &a.out {
        Some(path) => {
            write_text(path, &text)?;
            Ok(summary)
        }
        None => Ok(text),
    }
}

fn cmd_experiment(c: &ExperimentCmd) -> Outcome {
    match c {
        ExperimentCmd::Synthetic(a) => {
            let cfg = SyntheticConfig {
                model: a.model,
                sizes: a.n.clone(),
                instances: a.instances,
                seed: a.seed,
                avg_degree: a.avg_degree,
                node_cap: a.node_cap,
                solver_cmd: a.solver_cmd.clone(),
                k_max: a.k_max,
                workers: a.workers,
                timing: !a.no_timing,
            };
            let rows = experiment_synthetic(&cfg).map_err(domain)?;
            emit(&a.out, synthetic_csv(&rows, a.seed))
        }
        ExperimentCmd::Real(a) => {
            let r = experiment_real(&a.edges, &a.rule).map_err(|e| match e {
                tts_core::experiment::ExperimentError::Format(e) => io(e),
                e => domain(e),
            })?;
            Ok(format!(
                "nodes={} edges={} tts_greedy={} ts_greedy={} improvement={:.1}%\n",
                r.nodes, r.edges, r.tts_greedy, r.ts_greedy, r.improvement_pct
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Greedy(a) => cmd_greedy(a),
        Cmd::Exact(a) => cmd_exact(a),
        Cmd::Tree(a) => cmd_tree(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Transform(a) => cmd_transform(a),
        Cmd::IlpExport(a) => cmd_ilp_export(a),
        Cmd::Experiment(c) => cmd_experiment(c),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
