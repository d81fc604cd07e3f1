//! Minimum timed target sets on trees.
//!
//! Internal nodes are split by comparing `tau(v)` with the number `lbar(v)` of
//! non-leaf neighbors: `A` (greater), `B` (smaller), `C` (equal); `A` is split
//! into `A'` (`tau < d`) and `A''` (`tau = d`). Every `A` node costs exactly
//! two targets when at most one internal node lies in `A'' ∪ C`; otherwise
//! subtrees hanging below `A''` and `C` nodes are cut off bottom-up and solved
//! on their own.
//!
//! Nodes with threshold zero are removed first (their neighbors' thresholds
//! drop by one); they turn positive at step 1 by themselves and never need
//! targets. The designated root, and the head of each cut subtree, count as
//! internal even when their remaining degree is at most one.

use std::collections::VecDeque;

use thiserror::Error;

use crate::dynamics::default_max_steps;
use crate::graph::{Graph, NodeId, ThresholdError, Thresholds};
use crate::schedule::{is_tts, verify_tts, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    Leaf,
    /// `tau > lbar` and `tau < d`.
    APrime,
    /// `tau > lbar` and `tau = d`.
    ADoublePrime,
    B,
    C,
}

impl NodeClass {
    pub fn in_a(self) -> bool {
        matches!(self, NodeClass::APrime | NodeClass::ADoublePrime)
    }

    fn special(self) -> bool {
        matches!(self, NodeClass::ADoublePrime | NodeClass::C)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeClassification {
    pub root: NodeId,
    /// `l(v)`: leaf neighbors.
    pub leaf_count: Vec<usize>,
    /// `lbar(v)`: non-leaf neighbors.
    pub nonleaf_count: Vec<usize>,
    pub class: Vec<NodeClass>,
}

impl TreeClassification {
    pub fn members(&self, class: NodeClass) -> Vec<NodeId> {
        (0..self.class.len()).filter(|&v| self.class[v] == class).collect()
    }

    pub fn a_count(&self) -> usize {
        self.class.iter().filter(|c| c.in_a()).count()
    }

    /// `A'' ∪ C`.
    pub fn special_nodes(&self) -> Vec<NodeId> {
        (0..self.class.len()).filter(|&v| self.class[v].special()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("input graph is not a tree")]
    NotATree,
    #[error("root {0} is not a node of the tree")]
    BadRoot(NodeId),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}

fn check(tree: &Graph, tau: &Thresholds) -> Result<(), TreeError> {
    if !tree.is_tree() {
        return Err(TreeError::NotATree);
    }
    tau.validate(tree)?;
    Ok(())
}

fn classify(g: &Graph, tau: &[usize], root: NodeId) -> TreeClassification {
    let n = g.node_count();
    let is_leaf = |v: NodeId| v != root && g.degree(v) <= 1;
    let mut leaf_count = vec![0; n];
    let mut nonleaf_count = vec![0; n];
    let mut class = vec![NodeClass::Leaf; n];
    for v in 0..n {
        leaf_count[v] = g.neighbors(v).iter().filter(|&&u| is_leaf(u)).count();
        nonleaf_count[v] = g.degree(v) - leaf_count[v];
        if !is_leaf(v) {
            class[v] = class_of(tau[v], g.degree(v), nonleaf_count[v]);
        }
    }
    TreeClassification { root, leaf_count, nonleaf_count, class }
}

fn class_of(tau: usize, degree: usize, lbar: usize) -> NodeClass {
    use std::cmp::Ordering::*;
    match tau.cmp(&lbar) {
        Greater if tau == degree => NodeClass::ADoublePrime,
        Greater => NodeClass::APrime,
        Less => NodeClass::B,
        Equal => NodeClass::C,
    }
}

/// Classes of all nodes with `root` counted as internal.
pub fn classify_nodes(tree: &Graph, tau: &Thresholds, root: NodeId) -> Result<TreeClassification, TreeError> {
    check(tree, tau)?;
    if root >= tree.node_count() {
        return Err(TreeError::BadRoot(root));
    }
    Ok(classify(tree, tau.as_slice(), root))
}

/// Root used by the solver for a tree without zero thresholds: the lowest id
/// in `A'' ∪ C`, else the lowest-id internal node, else node 0.
fn choose_root(g: &Graph, tau: &[usize]) -> NodeId {
    let plain = classify(g, tau, usize::MAX);
    plain.special_nodes().first().copied().or_else(|| g.nodes().find(|&v| g.degree(v) >= 2)).unwrap_or(0)
}

/// Removes threshold-zero nodes one at a time, lowering the thresholds of
/// their remaining neighbors (never below zero), until none is left. Returns
/// the number of removed nodes, the surviving ids and the new thresholds
/// indexed by original id.
fn strip_zero_thresholds(g: &Graph, tau: &[usize]) -> (usize, Vec<NodeId>, Vec<usize>) {
    let n = g.node_count();
    let mut tau = tau.to_vec();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| tau[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        alive[v] = false;
        removed += 1;
        for &u in g.neighbors(v) {
            if alive[u] && tau[u] >= 1 {
                tau[u] -= 1;
                if tau[u] == 0 {
                    queue.push_back(u);
                }
            }
        }
    }
    (removed, (0..n).filter(|&v| alive[v]).collect(), tau)
}

type Part = (Graph, Vec<usize>, Vec<NodeId>);

/// Nonzero-threshold components of `(g, tau)` as induced subgraphs with their
/// thresholds and the map back to ids of `g`.
fn zero_free_components(g: &Graph, tau: &[usize]) -> (usize, Vec<Part>) {
    let (removed, keep, tau2) = strip_zero_thresholds(g, tau);
    let h = g.induced(&keep);
    let parts = h
        .components()
        .into_iter()
        .map(|comp| {
            let sub = h.induced(&comp);
            let sub_tau = comp.iter().map(|&v| tau2[keep[v]]).collect();
            let map = comp.iter().map(|&v| keep[v]).collect();
            (sub, sub_tau, map)
        })
        .collect();
    (removed, parts)
}

/// `2|A|` after removing zero thresholds, summed over the remaining
/// components (each classified around its solver root).
pub fn tree_lower_bound_2a(tree: &Graph, tau: &Thresholds) -> Result<usize, TreeError> {
    check(tree, tau)?;
    Ok(forest_lower_bound_2a(tree, tau.as_slice()))
}

pub(crate) fn forest_lower_bound_2a(g: &Graph, tau: &[usize]) -> usize {
    let (_, parts) = zero_free_components(g, tau);
    parts.iter().map(|(sub, t, _)| 2 * classify(sub, t, choose_root(sub, t)).a_count()).sum()
}

/// Minimum timed target set size of a tree, by the bottom-up reduction sweep.
pub fn min_tts_tree_size(tree: &Graph, tau: &Thresholds) -> Result<usize, TreeError> {
    check(tree, tau)?;
    let (_, parts) = zero_free_components(tree, tau.as_slice());
    Ok(parts.into_iter().map(|(sub, t, _)| component_size(&sub, t)).sum())
}

struct Rooted {
    parent: Vec<NodeId>,
    depth: Vec<usize>,
    /// BFS order from the root.
    order: Vec<NodeId>,
}

fn root_tree(g: &Graph, root: NodeId) -> Rooted {
    let n = g.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            }
        }
    }
    Rooted { parent, depth, order }
}

/// Linear-time sweep on a tree with all thresholds positive and `n >= 2`.
fn component_size(g: &Graph, mut tau: Vec<usize>) -> usize {
    let n = g.node_count();
    let root = choose_root(g, &tau);
    let initial = classify(g, &tau, root);
    if initial.special_nodes().len() <= 1 {
        return 2 * initial.a_count();
    }
    let rooted = root_tree(g, root);
    let mut alive = vec![true; n];
    let mut deg = g.degrees();
    let mut lbar = initial.nonleaf_count.clone();
    let is_leaf = |v: NodeId, deg: &[usize]| v != root && deg[v] <= 1;
    let class = |v: NodeId, deg: &[usize], lbar: &[usize], tau: &[usize]| {
        if is_leaf(v, deg) {
            NodeClass::Leaf
        } else {
            class_of(tau[v], deg[v], lbar[v])
        }
    };

    let max_depth = rooted.depth.iter().copied().max().unwrap_or(0);
    let mut levels: Vec<Vec<NodeId>> = vec![Vec::new(); max_depth + 1];
    for v in 0..n {
        levels[rooted.depth[v]].push(v);
    }

    let mut x = 0;
    for level in (1..=max_depth).rev() {
        for &u in &levels[level] {
            if !alive[u] {
                continue;
            }
            let cu = class(u, &deg, &lbar, &tau);
            if cu != NodeClass::ADoublePrime && cu != NodeClass::C && tau[u] != 0 {
                continue;
            }
            let z = rooted.parent[u];
            // Count A nodes in the current subtree of u, then cut it.
            let mut stack = vec![u];
            let mut subtree = Vec::new();
            while let Some(v) = stack.pop() {
                subtree.push(v);
                for &w in g.neighbors(v) {
                    if alive[w] && w != rooted.parent[v] {
                        stack.push(w);
                    }
                }
            }
            let a_here = subtree
                .iter()
                .filter(|&&v| if v == u { cu.in_a() } else { class(v, &deg, &lbar, &tau).in_a() })
                .count();
            x += 2 * a_here;
            if cu == NodeClass::ADoublePrime || tau[u] == 0 {
                for &v in &subtree {
                    alive[v] = false;
                }
                let z_was_leaf = is_leaf(z, &deg);
                tau[z] = tau[z].saturating_sub(1);
                deg[z] -= 1;
                if cu != NodeClass::Leaf {
                    lbar[z] -= 1;
                }
                if !z_was_leaf && is_leaf(z, &deg) {
                    lbar[rooted.parent[z]] -= 1;
                }
            } else {
                for &v in &subtree[1..] {
                    alive[v] = false;
                }
                deg[u] = 1;
                lbar[u] = 1;
                tau[u] = 1;
                lbar[z] -= 1;
            }
        }
    }
    x + 2 * (0..n).filter(|&v| alive[v] && class(v, &deg, &lbar, &tau).in_a()).count()
}

/// A timed target set of minimum size, assembled from the reductions used by
/// [`min_tts_tree_size`]. Trailing empty steps are appended until the
/// verifier accepts. Every intermediate schedule is simulated, so this is
/// much slower than the size sweep on large trees.
pub fn construct_tts_tree(tree: &Graph, tau: &Thresholds) -> Result<Schedule, TreeError> {
    check(tree, tau)?;
    // The reductions recurse once per cut; give deep trees room.
    let sched = if tree.node_count() > 2000 {
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(1 << 30)
                .spawn_scoped(s, || forest_schedule(tree, tau.as_slice()))
                .expect("spawn solver thread")
                .join()
                .expect("tree construction panicked")
        })
    } else {
        forest_schedule(tree, tau.as_slice())
    };
    Ok(sched)
}

/// Writes `sets[j]`, relabeled through `map`, into `dest[offset + j]`.
fn overlay(dest: &mut Vec<Vec<NodeId>>, offset: usize, sets: &[Vec<NodeId>], map: &[NodeId]) {
    if dest.len() < offset + sets.len() {
        dest.resize(offset + sets.len(), Vec::new());
    }
    for (j, set) in sets.iter().enumerate() {
        dest[offset + j].extend(set.iter().map(|&v| map[v]));
    }
}

fn pad_until_accepted(g: &Graph, tau: &[usize], mut sets: Vec<Vec<NodeId>>) -> Schedule {
    let thresholds = Thresholds::new(tau.to_vec());
    if sets.last().is_none_or(|s| !s.is_empty()) {
        sets.push(Vec::new());
    }
    let mut sched = Schedule::new(sets);
    let cap = sched.horizon() + default_max_steps(g);
    while !is_tts(g, &thresholds, &sched) {
        assert!(sched.horizon() < cap, "tree construction produced a schedule that never completes");
        sched.push(Vec::new());
    }
    sched
}

fn forest_schedule(g: &Graph, tau: &[usize]) -> Schedule {
    let (removed, parts) = zero_free_components(g, tau);
    let mut sets: Vec<Vec<NodeId>> = vec![Vec::new()];
    for (sub, sub_tau, map) in &parts {
        let s = tree_schedule(sub, sub_tau);
        overlay(&mut sets, 0, s.sets(), map);
    }
    // Each removed node needs one step to switch on before the rest starts.
    let mut out = vec![Vec::new(); removed];
    out.extend(sets);
    pad_until_accepted(g, tau, out)
}

/// Tree with all thresholds positive and at least two nodes.
fn tree_schedule(g: &Graph, tau: &[usize]) -> Schedule {
    let root = choose_root(g, tau);
    let cls = classify(g, tau, root);
    let special = cls.special_nodes();
    if special.len() <= 1 {
        return level_schedule(g, tau, root, &cls);
    }
    let rooted = root_tree(g, root);
    let u = *special
        .iter()
        .filter(|&&v| v != root)
        .max_by_key(|&&v| (rooted.depth[v], std::cmp::Reverse(v)))
        .expect("at least two special nodes");
    let z = rooted.parent[u];

    let mut in_sub = vec![false; g.node_count()];
    in_sub[u] = true;
    for &v in &rooted.order {
        if v != root && v != u && in_sub[rooted.parent[v]] {
            in_sub[v] = true;
        }
    }
    let sub: Vec<NodeId> = g.nodes().filter(|&v| in_sub[v]).collect();
    let head = sub.binary_search(&u).unwrap();
    let mut sub_tau: Vec<usize> = sub.iter().map(|&v| tau[v]).collect();
    sub_tau[head] -= 1;
    let head_sched = plain_subtree_schedule(&g.induced(&sub), &sub_tau, head);
    let k1 = head_sched.horizon();

    let mut sets: Vec<Vec<NodeId>> = Vec::new();
    if cls.class[u] == NodeClass::ADoublePrime {
        // Cut the whole subtree; its head is targeted twice right before and
        // when the parent switches on for good.
        let rest: Vec<NodeId> = g.nodes().filter(|&v| !in_sub[v]).collect();
        let mut rest_tau: Vec<usize> = rest.iter().map(|&v| tau[v]).collect();
        let zi = rest.binary_search(&z).unwrap();
        rest_tau[zi] = rest_tau[zi].saturating_sub(1);
        let rest_g = g.induced(&rest);
        let mut rest_sched = forest_schedule(&rest_g, &rest_tau);
        let mut i = settle_step(&rest_g, &rest_tau, &rest_sched, zi);
        if i == 0 {
            let mut shifted = vec![Vec::new()];
            shifted.extend(rest_sched.into_sets());
            rest_sched = Schedule::new(shifted);
            i = 1;
        }
        let offset = k1 - 2;
        overlay(&mut sets, 0, &head_sched.sets()[..=k1 - 3], &sub);
        overlay(&mut sets, offset, rest_sched.sets(), &rest);
        sets[offset + i - 1].push(u);
        sets[offset + i].push(u);
    } else {
        // Keep the head as a leaf of threshold one attached to its parent.
        let rest: Vec<NodeId> = g.nodes().filter(|&v| !in_sub[v] || v == u).collect();
        let mut rest_tau: Vec<usize> = rest.iter().map(|&v| tau[v]).collect();
        rest_tau[rest.binary_search(&u).unwrap()] = 1;
        let rest_sched = forest_schedule(&g.induced(&rest), &rest_tau);
        overlay(&mut sets, 0, &head_sched.sets()[..=k1 - 2], &sub);
        overlay(&mut sets, k1 - 1, rest_sched.sets(), &rest);
    }
    pad_until_accepted(g, tau, sets)
}

/// First step from which `v` stays positive under `sched`.
fn settle_step(g: &Graph, tau: &[usize], sched: &Schedule, v: NodeId) -> usize {
    let trace = verify_tts(g, &Thresholds::new(tau.to_vec()), sched).expect("sub-schedule is accepted");
    let k = sched.horizon();
    let mut i = k;
    while i > 0 && trace.positive(sched, i - 1).contains(v) {
        i -= 1;
    }
    i
}

/// Base case: `S_i = (L_{d-i} ∪ L_{d-i-1}) ∩ A` for `i = 0..=d`, with levels
/// taken from `root`.
fn level_schedule(g: &Graph, tau: &[usize], root: NodeId, cls: &TreeClassification) -> Schedule {
    let rooted = root_tree(g, root);
    let d = rooted.depth.iter().copied().max().unwrap_or(0);
    let mut sets = vec![Vec::new(); d + 1];
    for v in g.nodes().filter(|&v| cls.class[v].in_a()) {
        let l = rooted.depth[v];
        sets[d - l].push(v);
        if l < d {
            sets[d - l - 1].push(v);
        }
    }
    pad_until_accepted(g, tau, sets)
}

/// Schedule for a tree whose internal nodes other than `root` avoid
/// `A'' ∪ C`, built bottom-up: child subtrees run side by side from step 0
/// and stay positive; then the root is targeted twice if it is in `A`
/// (steps `k+1`, `k+2`, final empty step `k+3`), or switches on by itself
/// (two trailing empty steps) otherwise.
fn plain_subtree_schedule(g: &Graph, tau: &[usize], root: NodeId) -> Schedule {
    let rooted = root_tree(g, root);
    let internal = |v: NodeId| v == root || g.degree(v) >= 2;
    let mut parts: Vec<Vec<Vec<NodeId>>> = vec![Vec::new(); g.node_count()];
    for &v in rooted.order.iter().rev() {
        if !internal(v) {
            continue;
        }
        let kids: Vec<NodeId> =
            g.neighbors(v).iter().copied().filter(|&c| c != rooted.parent[v] && internal(c)).collect();
        let mut sets: Vec<Vec<NodeId>> = vec![Vec::new()];
        for &c in &kids {
            let child = std::mem::take(&mut parts[c]);
            if sets.len() < child.len() {
                sets.resize(child.len(), Vec::new());
            }
            for (j, s) in child.into_iter().enumerate() {
                sets[j].extend(s);
            }
        }
        if tau[v] > kids.len() {
            sets.extend([vec![v], vec![v], Vec::new()]);
        } else {
            sets.extend([Vec::new(), Vec::new()]);
        }
        parts[v] = sets;
    }
    Schedule::new(std::mem::take(&mut parts[root]))
}
