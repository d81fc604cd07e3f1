//! Text formats: edge lists, threshold files and schedules.
//!
//! Edge lists hold one edge per line as two whitespace-separated labels;
//! `#` lines are comments. Labels map to dense ids in first-seen order,
//! except that a `# nodes N` comment before the first edge pre-registers the
//! labels `0..N-1` (this keeps isolated nodes and ids of generated graphs).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, NodeId, Thresholds};
use crate::schedule::Schedule;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String, FormatError> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|error| FormatError::Io { path: path.display().to_string(), error })
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|error| FormatError::Io { path: path.display().to_string(), error })
}

/// A graph with the external label of each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    /// Labels `0..n-1`.
    pub fn numbered(graph: Graph) -> Self {
        let labels = graph.nodes().map(|v| v.to_string()).collect();
        LabeledGraph { graph, labels }
    }

    pub fn index(&self) -> HashMap<&str, NodeId> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}

struct Interner {
    ids: HashMap<String, NodeId>,
    labels: Vec<String>,
}

impl Interner {
    fn id(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(label.to_string(), id);
        self.labels.push(label.to_string());
        id
    }
}

/// Parses an edge list. Duplicate and reversed edges collapse; self-loops
/// are rejected.
pub fn parse_edge_list(text: &str) -> Result<LabeledGraph, FormatError> {
    let mut names = Interner { ids: HashMap::new(), labels: Vec::new() };
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let words: Vec<&str> = comment.split_whitespace().collect();
            if let ["nodes", count] = words.as_slice() {
                if !edges.is_empty() {
                    return Err(parse_err(i + 1, "`# nodes` must precede the edges"));
                }
                let count: usize = count.parse().map_err(|_| parse_err(i + 1, "bad node count"))?;
                for v in 0..count {
                    names.id(&v.to_string());
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let (Some(a), Some(b), None) = (words.next(), words.next(), words.next()) else {
            return Err(parse_err(i + 1, "expected two labels"));
        };
        if a == b {
            return Err(parse_err(i + 1, format!("self-loop at {a}")));
        }
        let (u, v) = (names.id(a), names.id(b));
        edges.push((u.min(v), u.max(v)));
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::new(names.labels.len(), edges).expect("edges are simple after dedup");
    Ok(LabeledGraph { graph, labels: names.labels })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<LabeledGraph, FormatError> {
    parse_edge_list(&read_text(path)?)
}

/// Writes `header` lines as comments, then `# nodes N` when the labels are
/// exactly `0..N-1`, then the edges.
pub fn format_edge_list(g: &LabeledGraph, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    if g.labels.iter().enumerate().all(|(i, l)| *l == i.to_string()) {
        let _ = writeln!(out, "# nodes {}", g.labels.len());
    }
    for (u, v) in g.graph.edges() {
        let _ = writeln!(out, "{} {}", g.labels[u], g.labels[v]);
    }
    out
}

/// How thresholds are assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdRule {
    Strict,
    Simple,
    File(String),
}

impl std::str::FromStr for ThresholdRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ThresholdRule::Strict),
            "simple" => Ok(ThresholdRule::Simple),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(ThresholdRule::File(path.to_string())),
                _ => Err(format!("unknown threshold rule `{s}` (expected strict, simple or file:<path>)")),
            },
        }
    }
}

impl ThresholdRule {
    /// Builds thresholds; file values are not validated against degrees.
    pub fn apply(&self, g: &LabeledGraph) -> Result<Thresholds, FormatError> {
        match self {
            ThresholdRule::Strict => Ok(Thresholds::strict_majority(&g.graph)),
            ThresholdRule::Simple => Ok(Thresholds::simple_majority(&g.graph)),
            ThresholdRule::File(path) => parse_thresholds(&read_text(path)?, g),
        }
    }
}

/// `label value` lines; every node needs exactly one value.
pub fn parse_thresholds(text: &str, g: &LabeledGraph) -> Result<Thresholds, FormatError> {
    let index = g.index();
    let mut values: Vec<Option<usize>> = vec![None; g.labels.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let (Some(label), Some(value), None) = (words.next(), words.next(), words.next()) else {
            return Err(parse_err(i + 1, "expected `label value`"));
        };
        let &v = index.get(label).ok_or_else(|| parse_err(i + 1, format!("unknown node {label}")))?;
        let value = value.parse().map_err(|_| parse_err(i + 1, format!("bad threshold {value:?}")))?;
        if values[v].replace(value).is_some() {
            return Err(parse_err(i + 1, format!("duplicate threshold for {label}")));
        }
    }
    match values.iter().position(Option::is_none) {
        Some(v) => Err(parse_err(0, format!("no threshold for node {}", g.labels[v]))),
        None => Ok(Thresholds::new(values.into_iter().flatten().collect())),
    }
}

pub fn format_thresholds(tau: &Thresholds, labels: &[String]) -> String {
    let mut out = String::new();
    for (v, t) in tau.as_slice().iter().enumerate() {
        let _ = writeln!(out, "{} {t}", labels[v]);
    }
    out
}

/// `i: labels` lines with `i` running `0..=k`.
pub fn parse_schedule(text: &str, g: &LabeledGraph) -> Result<Schedule, FormatError> {
    let index = g.index();
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (step, rest) = line.split_once(':').ok_or_else(|| parse_err(i + 1, "expected `i: labels`"))?;
        let step: usize = step.trim().parse().map_err(|_| parse_err(i + 1, "bad step index"))?;
        if step != sets.len() {
            return Err(parse_err(i + 1, format!("expected step {}, found {step}", sets.len())));
        }
        let set = rest
            .split_whitespace()
            .map(|l| index.get(l).copied().ok_or_else(|| parse_err(i + 1, format!("unknown node {l}"))))
            .collect::<Result<Vec<_>, _>>()?;
        sets.push(set);
    }
    if sets.is_empty() {
        return Err(parse_err(0, "schedule has no steps"));
    }
    Ok(Schedule::new(sets))
}

pub fn format_schedule(sched: &Schedule, labels: &[String]) -> String {
    let mut out = String::new();
    for (i, set) in sched.sets().iter().enumerate() {
        let _ = write!(out, "{i}:");
        for &v in set {
            let _ = write!(out, " {}", labels[v]);
        }
        out.push('\n');
    }
    out
}
