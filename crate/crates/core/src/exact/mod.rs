//! Exact solvers for small instances.
//!
//! The timed oracle is a 0/1-cost shortest path over configurations: from the
//! positive set `A` of the current step, targeting a node costs one, and
//! advancing to the rule-activated set of `A` costs nothing. The search starts
//! at the empty set and stops once all nodes are positive, which is a fixed
//! point, so a final advance with nothing targeted is always available.

pub mod ilp;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::dynamics::{MaskDynamics, Model};
use crate::graph::{Graph, NodeId, Thresholds};
use crate::schedule::Schedule;

pub const DEFAULT_TTS_CAP: usize = 20;
pub const DEFAULT_DTTS_CAP: usize = 12;
pub const DEFAULT_TS_CAP: usize = 20;

/// Hard limits of the state encodings, whatever cap the caller asks for.
pub const TTS_LIMIT: usize = 40;
pub const DTTS_LIMIT: usize = 32;
pub const TS_LIMIT: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("graph has {n} nodes, above the exact solver cap of {cap}")]
    NodeCap { n: usize, cap: usize },
}

fn check_cap(n: usize, cap: usize, limit: usize) -> Result<(), ExactError> {
    let cap = cap.min(limit);
    if n > cap {
        Err(ExactError::NodeCap { n, cap })
    } else {
        Ok(())
    }
}

const ADVANCE: u8 = u8::MAX;

struct Visit {
    dist: u32,
    prev: u64,
    edge: u8,
}

/// Generic 0/1 BFS. `key` packs the search state; `expand` yields
/// `(next_key, cost, edge)` and `is_goal` tests popped states.
fn zero_one_bfs(
    start: u64,
    mut expand: impl FnMut(u64, &mut Vec<(u64, u32, u8)>),
    is_goal: impl Fn(u64) -> bool,
) -> Option<(u64, HashMap<u64, Visit>)> {
    let mut table: HashMap<u64, Visit> = HashMap::new();
    table.insert(start, Visit { dist: 0, prev: start, edge: ADVANCE });
    let mut deque = VecDeque::from([(start, 0u32)]);
    let mut out = Vec::new();
    while let Some((state, d)) = deque.pop_front() {
        if table[&state].dist < d {
            continue;
        }
        if is_goal(state) {
            return Some((state, table));
        }
        out.clear();
        expand(state, &mut out);
        for &(next, cost, edge) in &out {
            let nd = d + cost;
            let better = table.get(&next).is_none_or(|v| nd < v.dist);
            if better {
                table.insert(next, Visit { dist: nd, prev: state, edge });
                if cost == 0 {
                    deque.push_front((next, nd));
                } else {
                    deque.push_back((next, nd));
                }
            }
        }
    }
    None
}

/// Edges from `start` to `goal`, oldest first.
fn path_edges(table: &HashMap<u64, Visit>, start: u64, goal: u64) -> Vec<u8> {
    let mut edges = Vec::new();
    let mut cur = goal;
    while cur != start {
        let visit = &table[&cur];
        edges.push(visit.edge);
        cur = visit.prev;
    }
    edges.reverse();
    edges
}

/// Turns a target/advance edge sequence into a schedule ending with an empty
/// set after the last advance.
fn schedule_from_edges(edges: &[u8]) -> Schedule {
    let mut sets = vec![Vec::new()];
    for &e in edges {
        if e == ADVANCE {
            sets.push(Vec::new());
        } else {
            sets.last_mut().unwrap().push(e as NodeId);
        }
    }
    if !sets.last().unwrap().is_empty() {
        sets.push(Vec::new());
    }
    Schedule::new(sets)
}

/// Minimum timed target set size and an optimal schedule.
pub fn min_tts_exact(g: &Graph, tau: &Thresholds, node_cap: usize) -> Result<(usize, Schedule), ExactError> {
    let n = g.node_count();
    check_cap(n, node_cap, TTS_LIMIT)?;
    if n == 0 {
        return Ok((0, Schedule::empty(0)));
    }
    let md = MaskDynamics::new(g, tau);
    let full = md.full();
    let (goal, table) = zero_one_bfs(
        0,
        |a, out| {
            let next = md.activated(a);
            if next != a {
                out.push((next, 0, ADVANCE));
            }
            for v in 0..n {
                if a >> v & 1 == 0 {
                    out.push((a | 1 << v, 1, v as u8));
                }
            }
        },
        |a| a == full,
    )
    .expect("targeting every node always succeeds");
    let edges = path_edges(&table, 0, goal);
    Ok((table[&goal].dist as usize, schedule_from_edges(&edges)))
}

/// Minimum size of a timed target set that targets each node at most once.
pub fn min_dtts_exact(g: &Graph, tau: &Thresholds, node_cap: usize) -> Result<(usize, Schedule), ExactError> {
    let n = g.node_count();
    check_cap(n, node_cap, DTTS_LIMIT)?;
    if n == 0 {
        return Ok((0, Schedule::empty(0)));
    }
    let md = MaskDynamics::new(g, tau);
    let full = md.full();
    let pack = |a: u64, used: u64| a | used << 32;
    let (goal, table) = zero_one_bfs(
        0,
        |key, out| {
            let (a, used) = (key & 0xffff_ffff, key >> 32);
            let next = md.activated(a);
            if next != a {
                out.push((pack(next, used), 0, ADVANCE));
            }
            for v in 0..n {
                let bit = 1u64 << v;
                if a & bit == 0 && used & bit == 0 {
                    out.push((pack(a | bit, used | bit), 1, v as u8));
                }
            }
        },
        |key| key & 0xffff_ffff == full,
    )
    .expect("targeting every node once always succeeds");
    let edges = path_edges(&table, 0, goal);
    Ok((table[&goal].dist as usize, schedule_from_edges(&edges)))
}

/// Minimum target set in `model`, by increasing cardinality; among sets of
/// the minimum size the lexicographically first (by bitmask order) is chosen.
pub fn min_ts_exact(
    g: &Graph,
    tau: &Thresholds,
    model: Model,
    node_cap: usize,
) -> Result<(usize, Vec<NodeId>), ExactError> {
    let n = g.node_count();
    check_cap(n, node_cap, TS_LIMIT)?;
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let md = MaskDynamics::new(g, tau);
    let mut memo = ReachMemo::new(&md, model);
    for size in 0..=n {
        let mut found = None;
        for_each_subset_of_size(n, size, |s| {
            if memo.reaches(s) {
                found = Some(s);
                false
            } else {
                true
            }
        });
        if let Some(s) = found {
            return Ok((size, (0..n).filter(|&v| s >> v & 1 == 1).collect()));
        }
    }
    unreachable!("V itself is a target set")
}

/// Calls `f` on every `n`-bit mask with `size` ones in increasing order until
/// `f` returns false.
fn for_each_subset_of_size(n: usize, size: usize, mut f: impl FnMut(u64) -> bool) {
    if size == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut s: u64 = (1u64 << size) - 1;
    while s < limit {
        if !f(s) {
            return;
        }
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Lazily filled table: does the orbit of a configuration reach `V`?
struct ReachMemo<'a> {
    md: &'a MaskDynamics,
    model: Model,
    // 0 unknown, 1 yes, 2 no, 3 on the current path
    state: Vec<u8>,
}

impl<'a> ReachMemo<'a> {
    fn new(md: &'a MaskDynamics, model: Model) -> Self {
        ReachMemo { md, model, state: vec![0; 1usize << md.n] }
    }

    fn reaches(&mut self, start: u64) -> bool {
        let full = self.md.full();
        let mut path = Vec::new();
        let mut cur = start;
        let answer = loop {
            match self.state[cur as usize] {
                1 => break true,
                2 => break false,
                3 => break cur == full,
                _ => {
                    if cur == full {
                        break true;
                    }
                    self.state[cur as usize] = 3;
                    path.push(cur);
                    cur = self.md.step(cur, self.model);
                }
            }
        };
        let mark = if answer { 1 } else { 2 };
        for s in path {
            self.state[s as usize] = mark;
        }
        answer
    }
}
