//! Synchronous threshold dynamics.
//!
//! In the non-progressive model a node is positive in the next step iff at
//! least `tau(v)` of its neighbors are positive now; in the progressive model
//! positive nodes additionally stay positive. Non-progressive orbits always
//! end in a cycle of length one or two.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{Graph, NodeId, Thresholds};

/// Set of positive nodes over `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration(FixedBitSet);

impl Configuration {
    pub fn empty(n: usize) -> Self {
        Configuration(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Configuration(bits)
    }

    /// Panics if a node id is `>= n`.
    pub fn from_nodes(n: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        for v in nodes {
            assert!(v < n, "node {v} out of range for {n} nodes");
            bits.insert(v);
        }
        Configuration(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: NodeId) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: NodeId) {
        self.0.set(v, false);
    }

    pub fn is_all(&self) -> bool {
        self.0.is_full()
    }

    pub fn union_with(&mut self, other: &Configuration) {
        self.0.union_with(&other.0);
    }

    pub fn is_subset(&self, other: &Configuration) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.ones()
    }

    /// `'1'` for positive, `'0'` for negative, node 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len()).map(|v| if self.contains(v) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.nodes()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Progressive,
    NonProgressive,
}

/// Number of positive neighbors of `v` in `conf`.
pub fn positive_neighbors(g: &Graph, conf: &Configuration, v: NodeId) -> usize {
    g.neighbors(v).iter().filter(|&&u| conf.contains(u)).count()
}

/// The set of nodes with at least `tau(v)` positive neighbors in `conf`.
pub fn activated(g: &Graph, tau: &Thresholds, conf: &Configuration) -> Configuration {
    let n = g.node_count();
    let mut next = Configuration::empty(n);
    for v in 0..n {
        if positive_neighbors(g, conf, v) >= tau.get(v) {
            next.insert(v);
        }
    }
    next
}

/// One synchronous update.
pub fn step(g: &Graph, tau: &Thresholds, conf: &Configuration, model: Model) -> Configuration {
    let mut next = activated(g, tau, conf);
    if model == Model::Progressive {
        next.union_with(conf);
    }
    next
}

/// `4m + 2n + 4`.
pub fn default_max_steps(g: &Graph) -> usize {
    4 * g.edge_count() + 2 * g.node_count() + 4
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult {
    /// Steps before the first configuration of the limit cycle.
    pub transient_length: usize,
    pub cycle_length: usize,
    /// The repeating configurations in orbit order.
    pub cycle_configs: Vec<Configuration>,
    pub saw_all_positive: bool,
    /// `A_0, A_1, ...` up to and including the first repeated configuration's
    /// earlier occurrence plus one period; only filled when requested.
    pub trace: Option<Vec<Configuration>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("no repeated configuration within {0} steps")]
    StepLimit(usize),
    #[error("configuration has {got} nodes but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Iterates the non-progressive rule from `conf` until a configuration repeats.
pub fn run_to_limit(
    g: &Graph,
    tau: &Thresholds,
    conf: &Configuration,
    max_steps: usize,
    keep_trace: bool,
) -> Result<OrbitResult, DynamicsError> {
    run_model_to_limit(g, tau, conf, Model::NonProgressive, max_steps, keep_trace)
}

/// Same as [`run_to_limit`] for either model.
pub fn run_model_to_limit(
    g: &Graph,
    tau: &Thresholds,
    conf: &Configuration,
    model: Model,
    max_steps: usize,
    keep_trace: bool,
) -> Result<OrbitResult, DynamicsError> {
    if conf.len() != g.node_count() {
        return Err(DynamicsError::SizeMismatch { expected: g.node_count(), got: conf.len() });
    }
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    let mut history = vec![conf.clone()];
    let mut saw_all = conf.is_all();
    seen.insert(conf.clone(), 0);
    for t in 1..=max_steps {
        let next = step(g, tau, &history[t - 1], model);
        saw_all |= next.is_all();
        if let Some(&first) = seen.get(&next) {
            let cycle_configs = history[first..].to_vec();
            history.push(next);
            return Ok(OrbitResult {
                transient_length: first,
                cycle_length: t - first,
                cycle_configs,
                saw_all_positive: saw_all,
                trace: keep_trace.then_some(history),
            });
        }
        seen.insert(next.clone(), t);
        history.push(next);
    }
    Err(DynamicsError::StepLimit(max_steps))
}

/// True iff starting from `conf`, some configuration of the orbit is all
/// positive.
pub fn reaches_all_positive(g: &Graph, tau: &Thresholds, conf: &Configuration, model: Model) -> bool {
    match model {
        Model::Progressive => {
            let mut cur = conf.clone();
            loop {
                if cur.is_all() {
                    return true;
                }
                let next = step(g, tau, &cur, Model::Progressive);
                if next == cur {
                    return false;
                }
                cur = next;
            }
        }
        Model::NonProgressive => {
            // An all-positive configuration is a fixed point, so if V is ever
            // reached the orbit ends there; checking the limit cycle suffices.
            let orbit = run_to_limit(g, tau, conf, default_max_steps(g).max(1), false)
                .expect("non-progressive threshold orbits have period at most two");
            orbit.saw_all_positive
        }
    }
}

/// Bitmask form of the dynamics for graphs with at most 64 nodes, used by the
/// exhaustive oracles.
#[derive(Debug, Clone)]
pub(crate) struct MaskDynamics {
    pub n: usize,
    pub neighbor_masks: Vec<u64>,
    pub tau: Vec<u32>,
}

impl MaskDynamics {
    pub fn new(g: &Graph, tau: &Thresholds) -> Self {
        let n = g.node_count();
        assert!(n <= 64, "mask dynamics needs n <= 64");
        let neighbor_masks = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |acc, &u| acc | (1 << u))).collect();
        MaskDynamics { n, neighbor_masks, tau: tau.as_slice().iter().map(|&t| t as u32).collect() }
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn activated(&self, conf: u64) -> u64 {
        let mut next = 0u64;
        for v in 0..self.n {
            if (self.neighbor_masks[v] & conf).count_ones() >= self.tau[v] {
                next |= 1 << v;
            }
        }
        next
    }

    pub fn step(&self, conf: u64, model: Model) -> u64 {
        match model {
            Model::NonProgressive => self.activated(conf),
            Model::Progressive => self.activated(conf) | conf,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_cycle, gen_er, gen_star};
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn conf(n: usize, nodes: &[NodeId]) -> Configuration {
        Configuration::from_nodes(n, nodes.iter().copied())
    }

    #[test]
    fn cycle_alternates() {
        let c4 = gen_cycle(4).unwrap();
        let tau = Thresholds::strict_majority(&c4);
        let next = step(&c4, &tau, &conf(4, &[0, 2]), Model::NonProgressive);
        assert_eq!(next, conf(4, &[1, 3]));
    }

    #[test]
    fn all_positive_is_fixed() {
        let c5 = gen_cycle(5).unwrap();
        let tau = Thresholds::strict_majority(&c5);
        let all = Configuration::full(5);
        assert_eq!(step(&c5, &tau, &all, Model::NonProgressive), all);
        let orbit = run_to_limit(&c5, &tau, &all, 10, false).unwrap();
        assert_eq!((orbit.transient_length, orbit.cycle_length), (0, 1));
        assert!(orbit.saw_all_positive);
    }

    #[test]
    fn star_center_oscillates() {
        let star = gen_star(11).unwrap();
        let tau = Thresholds::strict_majority(&star);
        let next = step(&star, &tau, &conf(11, &[0]), Model::NonProgressive);
        assert_eq!(next, Configuration::from_nodes(11, 1..11));

        let orbit = run_to_limit(&star, &tau, &conf(11, &[0]), 50, true).unwrap();
        assert_eq!(orbit.cycle_length, 2);
        assert_eq!(orbit.transient_length, 0);
        assert!(!orbit.saw_all_positive);
        assert_eq!(orbit.cycle_configs[1], Configuration::from_nodes(11, 1..11));
    }

    #[test]
    fn empty_configuration_stays_empty() {
        let c6 = gen_cycle(6).unwrap();
        let tau = Thresholds::strict_majority(&c6);
        let orbit = run_to_limit(&c6, &tau, &Configuration::empty(6), 5, false).unwrap();
        assert_eq!(orbit.cycle_length, 1);
        assert!(orbit.cycle_configs[0].is_empty());
    }

    #[test]
    fn target_set_acceptance_on_the_star() {
        let star = gen_star(10).unwrap();
        let tau = Thresholds::strict_majority(&star);
        let ts = conf(10, &[0, 1, 2, 3, 4, 5]);
        assert!(reaches_all_positive(&star, &tau, &ts, Model::NonProgressive));
        assert!(!reaches_all_positive(&star, &tau, &conf(10, &[0]), Model::NonProgressive));
        assert!(reaches_all_positive(&star, &tau, &conf(10, &[0]), Model::Progressive));
        assert!(reaches_all_positive(&star, &tau, &Configuration::full(10), Model::NonProgressive));
    }

    #[test]
    fn isolated_zero_threshold_nodes_turn_positive() {
        let g = Graph::empty(3);
        let tau = Thresholds::constant(3, 0);
        let next = step(&g, &tau, &Configuration::empty(3), Model::NonProgressive);
        assert!(next.is_all());
    }

    #[test]
    fn orbits_are_short_and_progressive_is_monotone() {
        let mut rng = SplitMix64::seed_from_u64(7);
        for i in 0..500u64 {
            let n = rng.gen_range(1..16u64) as usize;
            let g = gen_er(n, 0.3, i).unwrap();
            let tau = Thresholds::new(g.nodes().map(|v| rng.gen_range(0..=g.degree(v) as u64) as usize).collect());
            let start = Configuration::from_nodes(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            let orbit = run_to_limit(&g, &tau, &start, default_max_steps(&g), false).unwrap();
            assert!(orbit.cycle_length <= 2);
            assert!(orbit.transient_length <= 10 * g.edge_count() + n);

            let mut cur = start.clone();
            for _ in 0..n {
                let next = step(&g, &tau, &cur, Model::Progressive);
                assert!(cur.is_subset(&next));
                cur = next;
            }
            assert_eq!(step(&g, &tau, &cur, Model::Progressive), cur, "fixed point within n steps");
        }
    }

    #[test]
    fn mask_step_matches_bitset_step() {
        let g = gen_er(12, 0.4, 3).unwrap();
        let tau = Thresholds::simple_majority(&g);
        let md = MaskDynamics::new(&g, &tau);
        for mask in [0u64, 1, 0b1010_1010_1010, 0xfff, 0x5a5] {
            let c = Configuration::from_nodes(12, (0..12).filter(|&v| mask >> v & 1 == 1));
            let expect = step(&g, &tau, &c, Model::NonProgressive);
            let got = md.step(mask, Model::NonProgressive);
            assert_eq!(Configuration::from_nodes(12, (0..12).filter(|&v| got >> v & 1 == 1)), expect);
        }
    }
}
