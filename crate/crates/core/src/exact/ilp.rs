//! 0/1 program for a fixed horizon `k`, its LP text form, an external solver
//! bridge and the decoder back to schedules.
//!
//! `x_v_i = 1` means `v` is targeted at step `i`; `y_v_i = 1` means `v` is
//! rule-activated at step `i`. For `i >= 1`, `y_v_i` is forced to equal
//! `[#positive neighbors at i-1 >= tau(v)]` by a pair of rows, and every node
//! must be positive at step `k`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::process::Command;

use thiserror::Error;

use crate::graph::{Graph, NodeId, Thresholds};
use crate::schedule::{verify_tts, Rejection, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFamily {
    Activation,
    Support,
    Final,
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub family: RowFamily,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub n: usize,
    pub k: usize,
    pub objective: Vec<String>,
    pub rows: Vec<Row>,
    /// Variables fixed to zero in the `Bounds` section.
    pub fixed_zero: Vec<String>,
    pub binaries: Vec<String>,
}

pub fn x_name(v: NodeId, i: usize) -> String {
    format!("x_{v}_{i}")
}

pub fn y_name(v: NodeId, i: usize) -> String {
    format!("y_{v}_{i}")
}

impl IlpModel {
    pub fn variable_count(&self) -> usize {
        self.binaries.len()
    }

    pub fn count_rows(&self, family: RowFamily) -> usize {
        self.rows.iter().filter(|r| r.family == family).count()
    }

    pub fn to_lp_string(&self) -> String {
        let mut out = String::from("Minimize\n obj: ");
        if self.objective.is_empty() {
            out.push('0');
        } else {
            out.push_str(&self.objective.join(" + "));
        }
        out.push_str("\nSubject To\n");
        for (idx, row) in self.rows.iter().enumerate() {
            let _ = writeln!(out, " c{idx}: {} {} {}", format_expr(&row.terms), row.sense.symbol(), row.rhs);
        }
        out.push_str("Bounds\n");
        for var in &self.fixed_zero {
            let _ = writeln!(out, " {var} = 0");
        }
        out.push_str("Binary\n");
        for var in &self.binaries {
            let _ = writeln!(out, " {var}");
        }
        out.push_str("End\n");
        out
    }
}

fn format_expr(terms: &[(i64, String)]) -> String {
    let mut out = String::new();
    for (pos, (coef, var)) in terms.iter().enumerate() {
        let sign = if *coef < 0 { "-" } else { "+" };
        if pos == 0 {
            if *coef < 0 {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = coef.unsigned_abs();
        if mag != 1 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(var);
    }
    out
}

/// Builds the program for horizon `k`. Terms with zero coefficient are left
/// out unless a row would otherwise be empty.
pub fn emit_ilp(g: &Graph, tau: &Thresholds, k: usize) -> IlpModel {
    let n = g.node_count();
    let objective = (0..n).flat_map(|v| (0..=k).map(move |i| x_name(v, i))).collect();
    let neighbor_sum = |v: NodeId, i: usize, sign: i64| -> Vec<(i64, String)> {
        g.neighbors(v).iter().flat_map(|&u| [(sign, x_name(u, i - 1)), (sign, y_name(u, i - 1))]).collect()
    };
    let mut rows = Vec::new();
    for i in 1..=k {
        for v in 0..n {
            let (d, t) = (g.degree(v) as i64, tau.get(v) as i64);
            let mut terms = vec![(d + 1 - t, y_name(v, i))];
            terms.extend(neighbor_sum(v, i, -1));
            rows.push(Row { family: RowFamily::Activation, terms, sense: Sense::Ge, rhs: 1 - t });
        }
    }
    for i in 1..=k {
        for v in 0..n {
            let t = tau.get(v) as i64;
            let mut terms = neighbor_sum(v, i, 1);
            if t != 0 || terms.is_empty() {
                terms.push((-t, y_name(v, i)));
            }
            rows.push(Row { family: RowFamily::Support, terms, sense: Sense::Ge, rhs: 0 });
        }
    }
    for v in 0..n {
        let terms = vec![(1, x_name(v, k)), (1, y_name(v, k))];
        rows.push(Row { family: RowFamily::Final, terms, sense: Sense::Eq, rhs: 1 });
    }
    for i in 0..=k {
        for v in 0..n {
            let terms = vec![(1, x_name(v, i)), (1, y_name(v, i))];
            rows.push(Row { family: RowFamily::Overlap, terms, sense: Sense::Le, rhs: 1 });
        }
    }
    let fixed_zero = (0..n).map(|v| y_name(v, 0)).collect();
    let binaries = (0..n).flat_map(|v| (0..=k).flat_map(move |i| [x_name(v, i), y_name(v, i)])).collect();
    IlpModel { n, k, objective, rows, fixed_zero, binaries }
}

#[derive(Debug, Error)]
pub enum IlpError {
    #[error("solver unavailable: {0}")]
    Unavailable(String),
    #[error("solver reports the model infeasible")]
    Infeasible,
    #[error("cannot parse solver output: {0}")]
    Parse(String),
    #[error("assignment sets both x_{v}_{i} and y_{v}_{i}")]
    Overlap { v: NodeId, i: usize },
    #[error("decoded schedule fails verification: {0}")]
    Verification(Rejection),
    #[error("no horizon up to {0} is feasible")]
    AllInfeasible(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Binary values read from a solution file; absent variables are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    ones: HashMap<String, bool>,
}

impl Assignment {
    pub fn from_ones<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Assignment { ones: names.into_iter().map(|s| (s.into(), true)).collect() }
    }

    pub fn get(&self, name: &str) -> bool {
        self.ones.get(name).copied().unwrap_or(false)
    }

    pub fn count_ones(&self, prefix: &str) -> usize {
        self.ones.iter().filter(|(k, &v)| v && k.starts_with(prefix)).count()
    }
}

/// Parses `name value` lines. `#` starts a comment; a comment line of the
/// form `# status infeasible` marks an infeasible model.
pub fn parse_solution(text: &str) -> Result<Assignment, IlpError> {
    let mut ones = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let words: Vec<&str> = comment.split_whitespace().collect();
            if words.len() >= 2
                && words[0].eq_ignore_ascii_case("status")
                && words[1].eq_ignore_ascii_case("infeasible")
            {
                return Err(IlpError::Infeasible);
            }
            continue;
        }
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(IlpError::Parse(format!("line {}: expected `name value`", lineno + 1)));
        };
        let value: f64 =
            value.parse().map_err(|_| IlpError::Parse(format!("line {}: bad value {value:?}", lineno + 1)))?;
        ones.insert(name.to_string(), value >= 0.5);
    }
    Ok(Assignment { ones })
}

/// Writes the model to a temporary `.lp` file and runs `solver_command`
/// through `sh -c`. `{lp}` and `{sol}` in the command are replaced by the
/// model and solution paths; without placeholders both paths are appended.
pub fn solve_ilp_external(model: &IlpModel, solver_command: &str) -> Result<Assignment, IlpError> {
    let dir = tempfile::tempdir()?;
    let lp = dir.path().join("model.lp");
    let sol = dir.path().join("model.sol");
    fs::write(&lp, model.to_lp_string())?;
    let lp_arg = shell_quote(&lp.to_string_lossy());
    let sol_arg = shell_quote(&sol.to_string_lossy());
    let command = if solver_command.contains("{lp}") || solver_command.contains("{sol}") {
        solver_command.replace("{lp}", &lp_arg).replace("{sol}", &sol_arg)
    } else {
        format!("{solver_command} {lp_arg} {sol_arg}")
    };
    let output = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .output()
        .map_err(|e| IlpError::Unavailable(format!("cannot run sh: {e}")))?;
    let text = fs::read_to_string(&sol).ok();
    match (output.status.success(), text) {
        (_, Some(text)) => parse_solution(&text),
        (true, None) => Err(IlpError::Parse("solver wrote no solution file".into())),
        (false, None) => Err(IlpError::Unavailable(format!(
            "`{command}` exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        ))),
    }
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// `S_i = {v : x_v_i = 1}`. The model lets nodes be targeted at step `k`
/// itself; then an empty final step is appended, which is accepted because
/// the all-positive configuration is a fixed point.
pub fn schedule_from_assignment(
    g: &Graph,
    tau: &Thresholds,
    assignment: &Assignment,
    k: usize,
) -> Result<Schedule, IlpError> {
    let n = g.node_count();
    let mut sets = Vec::with_capacity(k + 2);
    for i in 0..=k {
        let mut set = Vec::new();
        for v in 0..n {
            let x = assignment.get(&x_name(v, i));
            if x && assignment.get(&y_name(v, i)) {
                return Err(IlpError::Overlap { v, i });
            }
            if x {
                set.push(v);
            }
        }
        sets.push(set);
    }
    if !sets[k].is_empty() {
        sets.push(Vec::new());
    }
    let sched = Schedule::new(sets);
    verify_tts(g, tau, &sched).map_err(IlpError::Verification)?;
    Ok(sched)
}

/// Solves horizons `0..=k_max` and keeps the smallest objective (earliest
/// horizon on ties).
pub fn min_tts_via_ilp(
    g: &Graph,
    tau: &Thresholds,
    k_max: usize,
    solver_command: &str,
) -> Result<(usize, Schedule), IlpError> {
    let mut best: Option<(usize, Schedule)> = None;
    for k in 0..=k_max {
        let model = emit_ilp(g, tau, k);
        let assignment = match solve_ilp_external(&model, solver_command) {
            Ok(a) => a,
            Err(IlpError::Infeasible) => continue,
            Err(e) => return Err(e),
        };
        let sched = schedule_from_assignment(g, tau, &assignment, k)?;
        if best.as_ref().is_none_or(|(size, _)| sched.size() < *size) {
            best = Some((sched.size(), sched));
        }
    }
    best.ok_or(IlpError::AllInfeasible(k_max))
}

/// Minimum non-progressive target set: the timed model with every target
/// pinned to step 0 (`x_v_i = 0` for `i >= 1`), swept over `0..=k_max`.
pub fn min_ts_via_ilp(
    g: &Graph,
    tau: &Thresholds,
    k_max: usize,
    solver_command: &str,
) -> Result<(usize, Vec<NodeId>), IlpError> {
    let mut best: Option<Vec<NodeId>> = None;
    for k in 0..=k_max {
        let mut model = emit_ilp(g, tau, k);
        model.fixed_zero.extend((1..=k).flat_map(|i| g.nodes().map(move |v| x_name(v, i))));
        let assignment = match solve_ilp_external(&model, solver_command) {
            Ok(a) => a,
            Err(IlpError::Infeasible) => continue,
            Err(e) => return Err(e),
        };
        let sched = schedule_from_assignment(g, tau, &assignment, k)?;
        let s = sched.set(0).to_vec();
        if best.as_ref().is_none_or(|b| s.len() < b.len()) {
            best = Some(s);
        }
    }
    best.map(|s| (s.len(), s)).ok_or(IlpError::AllInfeasible(k_max))
}
