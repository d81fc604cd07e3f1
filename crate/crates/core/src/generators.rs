//! Graph builders: fixed families, the tower fixture, and seeded random models.
//!
//! Random generators use SplitMix64 (64-bit state) and draw only `u64` ranges
//! and `f64` samples, so a seed yields the same graph on every platform.
//! Per-instance seeds come from [`instance_seed`].

use std::collections::HashSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::graph::{Graph, NodeId, Thresholds};
use crate::schedule::{is_tts, Schedule};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("{family} needs {requirement}")]
    Parameter { family: &'static str, requirement: &'static str },
}

fn check(ok: bool, family: &'static str, requirement: &'static str) -> Result<(), GeneratorError> {
    if ok {
        Ok(())
    } else {
        Err(GeneratorError::Parameter { family, requirement })
    }
}

fn build(n: usize, edges: Vec<(NodeId, NodeId)>) -> Graph {
    Graph::new(n, edges).expect("generator produced a simple graph")
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for instance `index` of a batch started from `base`.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    SplitMix64::seed_from_u64(base.wrapping_add(GOLDEN.wrapping_mul(index + 1))).next_u64()
}

pub fn rng_from_seed(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// `K_{1,n-1}` with center 0.
pub fn gen_star(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 2, "star", "n >= 2")?;
    Ok(build(n, (1..n).map(|v| (0, v)).collect()))
}

/// `K_{a,b}`; the left side is `0..a`.
pub fn gen_complete_bipartite(a: usize, b: usize) -> Result<Graph, GeneratorError> {
    check(a >= 1 && b >= 1, "complete bipartite graph", "both sides nonempty")?;
    Ok(build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect()))
}

pub fn gen_cycle(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 3, "cycle", "n >= 3")?;
    Ok(build(n, (0..n).map(|v| (v, (v + 1) % n)).collect()))
}

pub fn gen_path(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 1, "path", "n >= 1")?;
    Ok(build(n, (1..n).map(|v| (v - 1, v)).collect()))
}

pub fn gen_complete(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 1, "complete graph", "n >= 1")?;
    Ok(build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()))
}

/// Layered graph with `|L_i| = i`, complete joins between consecutive layers
/// and two leaves hanging off the single node of `L_1`.
#[derive(Debug, Clone)]
pub struct Tower {
    pub graph: Graph,
    /// `layers[i]` holds `L_{i+1}`.
    pub layers: Vec<Vec<NodeId>>,
    pub leaves: [NodeId; 2],
}

/// Layer `L_i` occupies ids `i(i-1)/2 ..`; the two leaves come last.
pub fn gen_tower(kappa: usize) -> Result<Tower, GeneratorError> {
    check(kappa >= 2, "tower", "kappa >= 2")?;
    let layers: Vec<Vec<NodeId>> = (1..=kappa).map(|i| (i * (i - 1) / 2..i * (i + 1) / 2).collect()).collect();
    let n = 2 + kappa * (kappa + 1) / 2;
    let leaves = [n - 2, n - 1];
    let mut edges = vec![(0, leaves[0]), (0, leaves[1])];
    for pair in layers.windows(2) {
        for &u in &pair[0] {
            for &v in &pair[1] {
                edges.push((u, v));
            }
        }
    }
    Ok(Tower { graph: build(n, edges), layers, leaves })
}

/// The disjoint timed target set of size `kappa + ceil(kappa/2) + 2` on the
/// tower under strict majority: `L_kappa` plus the lowest `ceil(kappa/2)` ids
/// of `L_{kappa-1}` at step 0, then the `L_1` node and one leaf at step
/// `kappa - 2`.
pub fn tower_reference_dtts(kappa: usize) -> Result<Schedule, GeneratorError> {
    check(kappa >= 3, "tower reference schedule", "kappa >= 3")?;
    let tower = gen_tower(kappa)?;
    let mut sched = Schedule::empty(kappa - 1);
    for &v in tower.layers[kappa - 1].iter().chain(&tower.layers[kappa - 2][..kappa.div_ceil(2)]) {
        sched.target(0, v);
    }
    sched.target(kappa - 2, tower.layers[0][0]);
    sched.target(kappa - 2, tower.leaves[0]);
    let tau = Thresholds::strict_majority(&tower.graph);
    let cap = crate::dynamics::default_max_steps(&tower.graph);
    while !is_tts(&tower.graph, &tau, &sched) {
        assert!(sched.horizon() < cap, "tower reference schedule never completes");
        sched.push(Vec::new());
    }
    Ok(sched)
}

/// Barabási–Albert: a clique on `m_attach + 1` nodes, then each new node links
/// to `m_attach` distinct existing nodes drawn proportionally to degree
/// without replacement. For `n <= m_attach + 1` the result is `K_n`.
pub fn gen_ba(n: usize, m_attach: usize, seed: u64) -> Result<Graph, GeneratorError> {
    check(n >= 1, "BA graph", "n >= 1")?;
    check(m_attach >= 1, "BA graph", "m_attach >= 1")?;
    let core = n.min(m_attach + 1);
    let mut edges: Vec<(NodeId, NodeId)> = (0..core).flat_map(|u| (u + 1..core).map(move |v| (u, v))).collect();
    let mut degree = vec![0u64; n];
    degree[..core].fill((core - 1) as u64);
    let mut rng = rng_from_seed(seed);
    for t in core..n {
        let mut chosen: Vec<NodeId> = Vec::with_capacity(m_attach);
        let mut total: u64 = degree[..t].iter().sum();
        for _ in 0..m_attach {
            let mut r = rng.gen_range(0..total);
            let pick = (0..t)
                .filter(|v| !chosen.contains(v))
                .find(|&v| {
                    if r < degree[v] {
                        true
                    } else {
                        r -= degree[v];
                        false
                    }
                })
                .expect("sample lies within the total weight");
            total -= degree[pick];
            chosen.push(pick);
        }
        for &u in &chosen {
            edges.push((u, t));
            degree[u] += 1;
        }
        degree[t] = m_attach as u64;
    }
    Ok(build(n, edges))
}

/// Erdős–Rényi `G(n, p)`: pairs `(i, j)`, `i < j`, in lexicographic order,
/// each kept when a uniform draw in `[0, 1)` falls below `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    check(n >= 1, "ER graph", "n >= 1")?;
    check((0.0..=1.0).contains(&p), "ER graph", "0 <= p <= 1")?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(build(n, edges))
}

/// Uniform labeled tree from a random Prüfer sequence.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Graph, GeneratorError> {
    check(n >= 1, "random tree", "n >= 1")?;
    if n <= 2 {
        return gen_path(n);
    }
    let mut rng = rng_from_seed(seed);
    let code: Vec<NodeId> = (0..n - 2).map(|_| rng.gen_range(0..n as u64) as NodeId).collect();
    Ok(build(n, prufer_edges(n, &code)))
}

fn prufer_edges(n: usize, code: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf, v));
        degree[leaf] = 0;
        degree[v] -= 1;
    }
    let rest: Vec<NodeId> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Average degree `d` realized by the BA attachment count.
pub fn ba_attach_for_degree(avg_degree: f64) -> usize {
    ((avg_degree / 2.0).round() as usize).max(1)
}

/// Average degree `d` realized by ER edge probability `d / (n - 1)`.
pub fn er_probability_for_degree(n: usize, avg_degree: f64) -> f64 {
    if n <= 1 {
        0.0
    } else {
        (avg_degree / (n - 1) as f64).min(1.0)
    }
}

/// One representative of every isomorphism class of trees on `n` nodes.
pub fn enumerate_free_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Graph> = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for attach in 0..size - 1 {
                let g = build(size, t.edges().chain([(attach, size - 1)]).collect());
                if seen.insert(canonical_tree_code(&g)) {
                    next.push(g);
                }
            }
        }
        level = next;
    }
    level
}

/// Isomorphism invariant string of a tree: the smaller AHU encoding over its
/// one or two centers.
pub fn canonical_tree_code(t: &Graph) -> String {
    tree_centers(t).into_iter().map(|c| ahu(t, c, usize::MAX)).min().unwrap_or_default()
}

fn ahu(t: &Graph, v: NodeId, parent: NodeId) -> String {
    let mut kids: Vec<String> = t.neighbors(v).iter().filter(|&&u| u != parent).map(|&u| ahu(t, u, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_centers(t: &Graph) -> Vec<NodeId> {
    let n = t.node_count();
    if n <= 2 {
        return t.nodes().collect();
    }
    let mut degree = t.degrees();
    let mut layer: Vec<NodeId> = t.nodes().filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in t.neighbors(v) {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}
