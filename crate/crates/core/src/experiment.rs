//! Experiment drivers: greedy versus optimum on random graphs, and greedy
//! on real networks.

use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{step, Configuration, Model};
use crate::exact::ilp::{min_ts_via_ilp, min_tts_via_ilp};
use crate::exact::{min_ts_exact, min_tts_exact};
use crate::generators::{
    ba_attach_for_degree, er_probability_for_degree, gen_ba, gen_er, instance_seed, GeneratorError,
};
use crate::graph::{Graph, ThresholdError, Thresholds};
use crate::greedy::{ts_greedy, tts_greedy};
use crate::io::{read_edge_list, FormatError, ThresholdRule};
use crate::schedule::is_tts;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RandomModel {
    Ba,
    Er,
}

impl RandomModel {
    pub fn name(self) -> &'static str {
        match self {
            RandomModel::Ba => "BA",
            RandomModel::Er => "ER",
        }
    }
}

impl FromStr for RandomModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(RandomModel::Ba),
            "er" => Ok(RandomModel::Er),
            _ => Err(format!("unknown model `{s}` (expected BA or ER)")),
        }
    }
}

/// Random graph with the given target average degree.
pub fn generate_instance(model: RandomModel, n: usize, avg_degree: f64, seed: u64) -> Result<Graph, GeneratorError> {
    match model {
        RandomModel::Ba => gen_ba(n, ba_attach_for_degree(avg_degree).min(n.saturating_sub(1)).max(1), seed),
        RandomModel::Er => gen_er(n, er_probability_for_degree(n, avg_degree), seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub model: RandomModel,
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub avg_degree: f64,
    /// Optima come from the exact oracles up to this many nodes.
    pub node_cap: usize,
    /// Used for optima above `node_cap`.
    pub solver_cmd: Option<String>,
    pub k_max: usize,
    pub workers: usize,
    pub timing: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            model: RandomModel::Ba,
            sizes: vec![10, 15, 20],
            instances: 10,
            seed: 1,
            avg_degree: 8.0,
            node_cap: 20,
            solver_cmd: None,
            k_max: 8,
            workers: 1,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMethod {
    Oracle,
    Ilp,
    None,
}

impl OptMethod {
    pub fn name(self) -> &'static str {
        match self {
            OptMethod::Oracle => "oracle",
            OptMethod::Ilp => "ilp",
            OptMethod::None => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRow {
    pub model: RandomModel,
    pub n: usize,
    pub seed: u64,
    pub instance: usize,
    pub ts_greedy: usize,
    pub tts_greedy: usize,
    pub ts_opt: Option<usize>,
    pub tts_opt: Option<usize>,
    pub opt_method: OptMethod,
    pub wall_ms: Option<f64>,
}

fn covers_in_one_step(g: &Graph, tau: &Thresholds, s: &[usize]) -> bool {
    step(g, tau, &Configuration::from_nodes(g.node_count(), s.iter().copied()), Model::NonProgressive).is_all()
}

fn run_instance(cfg: &SyntheticConfig, n: usize, instance: usize) -> Result<InstanceRow, ExperimentError> {
    let start = Instant::now();
    let seed = instance_seed(cfg.seed, instance as u64);
    let g = generate_instance(cfg.model, n, cfg.avg_degree, seed)?;
    let tau = Thresholds::strict_majority(&g);
    let tts = tts_greedy(&g, &tau)?;
    let ts = ts_greedy(&g, &tau)?;
    if !is_tts(&g, &tau, &tts) || !covers_in_one_step(&g, &tau, &ts) {
        return Err(ExperimentError::Invalid(format!(
            "greedy output rejected on {} n={n} seed={seed}",
            cfg.model.name()
        )));
    }

    let mut opt = (None, None, OptMethod::None);
    if n <= cfg.node_cap {
        if let (Ok((t, _)), Ok((s, _))) =
            (min_tts_exact(&g, &tau, cfg.node_cap), min_ts_exact(&g, &tau, Model::NonProgressive, cfg.node_cap))
        {
            opt = (Some(s), Some(t), OptMethod::Oracle);
        }
    }
    if opt.2 == OptMethod::None {
        if let Some(cmd) = &cfg.solver_cmd {
            // A failing solver leaves the optima blank.
            let t = min_tts_via_ilp(&g, &tau, cfg.k_max, cmd).ok().map(|r| r.0);
            let s = min_ts_via_ilp(&g, &tau, cfg.k_max, cmd).ok().map(|r| r.0);
            if t.is_some() || s.is_some() {
                opt = (s, t, OptMethod::Ilp);
            }
        }
    }
    Ok(InstanceRow {
        model: cfg.model,
        n,
        seed,
        instance,
        ts_greedy: ts.len(),
        tts_greedy: tts.size(),
        ts_opt: opt.0,
        tts_opt: opt.1,
        opt_method: opt.2,
        wall_ms: cfg.timing.then(|| start.elapsed().as_secs_f64() * 1000.0),
    })
}

/// One row per `(n, instance)` in input order, whatever the worker count.
pub fn experiment_synthetic(cfg: &SyntheticConfig) -> Result<Vec<InstanceRow>, ExperimentError> {
    let tasks: Vec<(usize, usize)> = cfg.sizes.iter().flat_map(|&n| (0..cfg.instances).map(move |i| (n, i))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(|&(n, i)| run_instance(cfg, n, i)).collect())
}

pub const CSV_COLUMNS: [&str; 10] =
    ["model", "n", "seed", "instance", "ts_greedy", "tts_greedy", "ts_opt", "tts_opt", "opt_method", "wall_ms"];

/// Mean and sample standard deviation of the present values.
pub fn mean_std(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    let v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return None;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64 } else { 0.0 };
    Some((mean, var.sqrt()))
}

fn fmt_opt(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_f(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_default()
}

/// CSV text: instance rows for each `n`, followed by a `mean` and a `std`
/// row for that `n`.
pub fn synthetic_csv(rows: &[InstanceRow], base_seed: u64) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    let mut start = 0;
    while start < rows.len() {
        let n = rows[start].n;
        let end = start + rows[start..].iter().take_while(|r| r.n == n).count();
        let group = &rows[start..end];
        for r in group {
            w.write_record([
                r.model.name().to_string(),
                r.n.to_string(),
                r.seed.to_string(),
                r.instance.to_string(),
                r.ts_greedy.to_string(),
                r.tts_greedy.to_string(),
                fmt_opt(r.ts_opt),
                fmt_opt(r.tts_opt),
                r.opt_method.name().to_string(),
                fmt_f(r.wall_ms),
            ])
            .expect("in-memory write");
        }
        let stats = [
            mean_std(group.iter().map(|r| r.ts_greedy as f64)),
            mean_std(group.iter().map(|r| r.tts_greedy as f64)),
            mean_std(group.iter().filter_map(|r| r.ts_opt.map(|x| x as f64))),
            mean_std(group.iter().filter_map(|r| r.tts_opt.map(|x| x as f64))),
            mean_std(group.iter().filter_map(|r| r.wall_ms)),
        ];
        for (label, pick) in [("mean", 0usize), ("std", 1)] {
            let field = |s: &Option<(f64, f64)>| fmt_f(s.map(|p| if pick == 0 { p.0 } else { p.1 }));
            w.write_record([
                group[0].model.name().to_string(),
                n.to_string(),
                base_seed.to_string(),
                label.to_string(),
                field(&stats[0]),
                field(&stats[1]),
                field(&stats[2]),
                field(&stats[3]),
                String::new(),
                field(&stats[4]),
            ])
            .expect("in-memory write");
        }
        start = end;
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealReport {
    pub nodes: usize,
    pub edges: usize,
    pub ts_greedy: usize,
    pub tts_greedy: usize,
    /// `(TS - TTS) / TS` in percent.
    pub improvement_pct: f64,
}

/// Both greedy heuristics on one graph, outputs checked before reporting.
pub fn greedy_report(g: &Graph, tau: &Thresholds) -> Result<RealReport, ExperimentError> {
    if g.node_count() == 0 {
        return Err(ExperimentError::EmptyGraph);
    }
    let tts = tts_greedy(g, tau)?;
    let ts = ts_greedy(g, tau)?;
    if !is_tts(g, tau, &tts) || !covers_in_one_step(g, tau, &ts) {
        return Err(ExperimentError::Invalid("greedy output rejected".into()));
    }
    let improvement_pct =
        if ts.is_empty() { 0.0 } else { 100.0 * (ts.len() as f64 - tts.size() as f64) / ts.len() as f64 };
    Ok(RealReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        ts_greedy: ts.len(),
        tts_greedy: tts.size(),
        improvement_pct,
    })
}

/// Reads an edge list (treated as undirected) and reports both greedy sizes.
pub fn experiment_real(path: impl AsRef<Path>, rule: &ThresholdRule) -> Result<RealReport, ExperimentError> {
    let g = read_edge_list(path)?;
    if g.graph.node_count() == 0 {
        return Err(ExperimentError::EmptyGraph);
    }
    let tau = rule.apply(&g)?;
    greedy_report(&g.graph, &tau)
}
