//! Timed target sets: a sequence `S_0..S_k` of targeted node sets.
//!
//! The verifier computes `Q_0 = {}` and `Q_i` = nodes with at least `tau(v)`
//! neighbors in `S_{i-1} ∪ Q_{i-1}`, and accepts iff `S_k` is empty and
//! `Q_k = V`.

use std::fmt;

use thiserror::Error;

use crate::dynamics::{activated, reaches_all_positive, step, Configuration, Model};
use crate::graph::{Graph, NodeId, Thresholds};

/// Sets `S_0..S_k`, each kept sorted and duplicate free. There is always at
/// least one set, so the horizon `k` is well defined.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Schedule {
    sets: Vec<Vec<NodeId>>,
}

impl Schedule {
    /// An empty input becomes the single empty set.
    pub fn new(sets: Vec<Vec<NodeId>>) -> Self {
        let mut sets: Vec<Vec<NodeId>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if sets.is_empty() {
            sets.push(Vec::new());
        }
        Schedule { sets }
    }

    /// `k + 1` empty sets.
    pub fn empty(k: usize) -> Self {
        Schedule { sets: vec![Vec::new(); k + 1] }
    }

    pub fn horizon(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn sets(&self) -> &[Vec<NodeId>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[NodeId] {
        &self.sets[i]
    }

    pub fn into_sets(self) -> Vec<Vec<NodeId>> {
        self.sets
    }

    /// Total number of targeted occurrences.
    pub fn size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn push(&mut self, mut set: Vec<NodeId>) {
        set.sort_unstable();
        set.dedup();
        self.sets.push(set);
    }

    /// Inserts `v` into `S_i`, growing the horizon with empty sets if needed.
    pub fn target(&mut self, i: usize, v: NodeId) {
        if self.sets.len() <= i {
            self.sets.resize(i + 1, Vec::new());
        }
        if let Err(pos) = self.sets[i].binary_search(&v) {
            self.sets[i].insert(pos, v);
        }
    }

    /// Largest node id mentioned, if any.
    pub fn max_node(&self) -> Option<NodeId> {
        self.sets.iter().flatten().copied().max()
    }

    /// Relabels node `v` as `map[v]`.
    pub fn relabeled(&self, map: &[NodeId]) -> Schedule {
        Schedule::new(self.sets.iter().map(|s| s.iter().map(|&v| map[v]).collect()).collect())
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.sets).finish()
    }
}

/// `Q_0..Q_k` of an accepted schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTrace {
    pub q: Vec<Configuration>,
}

impl QTrace {
    /// `A_i = S_i ∪ Q_i`.
    pub fn positive(&self, sched: &Schedule, i: usize) -> Configuration {
        let mut a = self.q[i].clone();
        for &v in sched.set(i) {
            a.insert(v);
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("the last set is not empty")]
    NonEmptyFinalSet,
    #[error("not every node is positive at the end")]
    FinalQNotAll,
    #[error("node {0} is out of range")]
    NodeOutOfRange(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("schedule rejected at step {index}: {reason}")]
pub struct Rejection {
    pub reason: RejectReason,
    pub index: usize,
}

/// Q-trace of `sched` without the acceptance test; `q.len() == k + 1`.
fn q_trace(g: &Graph, tau: &Thresholds, sched: &Schedule) -> Result<Vec<Configuration>, Rejection> {
    let n = g.node_count();
    for (i, s) in sched.sets().iter().enumerate() {
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(Rejection { reason: RejectReason::NodeOutOfRange(v), index: i });
        }
    }
    let mut q = vec![Configuration::empty(n)];
    for i in 1..=sched.horizon() {
        let mut a = q[i - 1].clone();
        for &v in sched.set(i - 1) {
            a.insert(v);
        }
        q.push(activated(g, tau, &a));
    }
    Ok(q)
}

pub fn verify_tts(g: &Graph, tau: &Thresholds, sched: &Schedule) -> Result<QTrace, Rejection> {
    let q = q_trace(g, tau, sched)?;
    let k = sched.horizon();
    if !sched.set(k).is_empty() {
        return Err(Rejection { reason: RejectReason::NonEmptyFinalSet, index: k });
    }
    if !q[k].is_all() {
        return Err(Rejection { reason: RejectReason::FinalQNotAll, index: k });
    }
    Ok(QTrace { q })
}

pub fn is_tts(g: &Graph, tau: &Thresholds, sched: &Schedule) -> bool {
    verify_tts(g, tau, sched).is_ok()
}

/// Whether `s` is a target set in `model`.
pub fn verify_ts(g: &Graph, tau: &Thresholds, s: &[NodeId], model: Model) -> bool {
    reaches_all_positive(g, tau, &Configuration::from_nodes(g.node_count(), s.iter().copied()), model)
}

/// No node is targeted at two different steps.
pub fn is_disjoint_schedule(sched: &Schedule) -> bool {
    let mut all: Vec<NodeId> = sched.sets().iter().flatten().copied().collect();
    let len = all.len();
    all.sort_unstable();
    all.dedup();
    all.len() == len
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("the given set is not a target set")]
    NotTargetSet,
    #[error(transparent)]
    NotTts(#[from] Rejection),
}

/// Embeds a non-progressive target set as `(S, {}, ..., {})`, with the horizon
/// the first step `i >= 1` at which every node is positive.
pub fn ts_as_schedule(g: &Graph, tau: &Thresholds, s: &[NodeId]) -> Result<Schedule, ScheduleError> {
    let n = g.node_count();
    if !verify_ts(g, tau, s, Model::NonProgressive) {
        return Err(ScheduleError::NotTargetSet);
    }
    let mut conf = Configuration::from_nodes(n, s.iter().copied());
    let mut k = 0;
    loop {
        conf = step(g, tau, &conf, Model::NonProgressive);
        k += 1;
        if conf.is_all() {
            break;
        }
    }
    let mut sched = Schedule::empty(k);
    sched.sets[0] = s.to_vec();
    let sched = Schedule::new(sched.sets);
    debug_assert!(is_tts(g, tau, &sched));
    Ok(sched)
}

/// Drops targets that are already rule-positive and cuts the horizon at the
/// first step where `Q = V`.
pub fn normalize_schedule(g: &Graph, tau: &Thresholds, sched: &Schedule) -> Result<Schedule, ScheduleError> {
    let trace = verify_tts(g, tau, sched)?;
    let cut = trace.q.iter().position(Configuration::is_all).expect("accepted schedules end with Q = V");
    let mut sets: Vec<Vec<NodeId>> =
        (0..cut).map(|i| sched.set(i).iter().copied().filter(|&v| !trace.q[i].contains(v)).collect()).collect();
    sets.push(Vec::new());
    Ok(Schedule { sets })
}

/// Every node positive at some step stays positive afterwards.
pub fn is_monotone(g: &Graph, tau: &Thresholds, sched: &Schedule) -> bool {
    let Ok(q) = q_trace(g, tau, sched) else { return false };
    let trace = QTrace { q };
    (1..=sched.horizon()).all(|i| trace.positive(sched, i - 1).is_subset(&trace.positive(sched, i)))
}
