//! Degree-ordered greedy heuristics.
//!
//! Nodes are processed by ascending degree (ties by id). A processed node that
//! is not targeted is "unselected". A neighbor `u` of the current node is
//! blocked when it already has `d(u) - tau(u)` unselected neighbors, i.e. one
//! more unselected neighbor would stop it from turning positive at step 1.

use crate::graph::{Graph, NodeId, ThresholdError, Thresholds};
use crate::schedule::Schedule;

fn degree_order(g: &Graph) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    order
}

fn blocked(g: &Graph, tau: &[usize], unselected: &[usize], v: NodeId) -> Vec<NodeId> {
    g.neighbors(v).iter().copied().filter(|&u| unselected[u] == g.degree(u) - tau[u]).collect()
}

fn mark_unselected(g: &Graph, unselected: &mut [usize], v: NodeId) {
    for &u in g.neighbors(v) {
        unselected[u] += 1;
    }
}

/// Returns `(S_0, S_1, {})`. A single blocked neighbor `w` of higher degree
/// is targeted at step 1 instead of targeting the current node at step 0;
/// its threshold is then treated as zero for the rest of the sweep.
pub fn tts_greedy(g: &Graph, tau: &Thresholds) -> Result<Schedule, ThresholdError> {
    tau.validate(g)?;
    let mut work = tau.as_slice().to_vec();
    let mut unselected = vec![0usize; g.node_count()];
    let (mut s0, mut s1) = (Vec::new(), Vec::new());
    for v in degree_order(g) {
        let b = blocked(g, &work, &unselected, v);
        match b.as_slice() {
            [] => mark_unselected(g, &mut unselected, v),
            &[w] if g.degree(w) > g.degree(v) => {
                mark_unselected(g, &mut unselected, v);
                s1.push(w);
                work[w] = 0;
            }
            _ => s0.push(v),
        }
    }
    Ok(Schedule::new(vec![s0, s1, Vec::new()]))
}

/// Target set that makes every node positive after one non-progressive step.
pub fn ts_greedy(g: &Graph, tau: &Thresholds) -> Result<Vec<NodeId>, ThresholdError> {
    tau.validate(g)?;
    let mut unselected = vec![0usize; g.node_count()];
    let mut s = Vec::new();
    for v in degree_order(g) {
        if blocked(g, tau.as_slice(), &unselected, v).is_empty() {
            mark_unselected(g, &mut unselected, v);
        } else {
            s.push(v);
        }
    }
    s.sort_unstable();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{step, Configuration, Model};
    use crate::exact::min_tts_exact;
    use crate::generators::{gen_ba, gen_complete, gen_er, gen_path, gen_star};
    use crate::schedule::is_tts;
    use proptest::prelude::*;

    fn one_step_covers(g: &Graph, tau: &Thresholds, s: &[NodeId]) -> bool {
        step(g, tau, &Configuration::from_nodes(g.node_count(), s.iter().copied()), Model::NonProgressive).is_all()
    }

    #[test]
    fn star_trace() {
        // Leaves 1..9 (degree 1, tau 1) come first. Leaf 1 sees the center
        // with 0 unselected neighbors and d - tau = 4: not blocked. After
        // leaves 1..4 the center has 4 unselected neighbors, so leaf 5 finds
        // the center blocked; the center has larger degree and is targeted at
        // step 1 with its working threshold zeroed. The remaining leaves are
        // free, and finally the center blocks on every leaf (d - tau = 0).
        let g = gen_star(10).unwrap();
        let tau = Thresholds::strict_majority(&g);
        let sched = tts_greedy(&g, &tau).unwrap();
        assert_eq!(sched, Schedule::new(vec![vec![0], vec![0], vec![]]));
        assert!(is_tts(&g, &tau, &sched));

        let s = ts_greedy(&g, &tau).unwrap();
        assert_eq!(s, vec![0, 5, 6, 7, 8, 9]);
        assert!(one_step_covers(&g, &tau, &s));
    }

    #[test]
    fn small_cases() {
        let k2 = gen_path(2).unwrap();
        let ones = Thresholds::constant(2, 1);
        let sched = tts_greedy(&k2, &ones).unwrap();
        assert_eq!(sched.size(), 2);
        assert!(is_tts(&k2, &ones, &sched));
        assert_eq!(min_tts_exact(&k2, &ones, 20).unwrap().0, 2);
        // A single node only oscillates with its neighbor, so both are needed.
        let s = ts_greedy(&k2, &ones).unwrap();
        assert_eq!(s, vec![0, 1]);
        assert!(!one_step_covers(&k2, &ones, &[0]));
        assert!(one_step_covers(&k2, &ones, &s));

        let k4 = gen_complete(4).unwrap();
        let tau = Thresholds::strict_majority(&k4);
        let s = ts_greedy(&k4, &tau).unwrap();
        assert!(one_step_covers(&k4, &tau, &s));
        assert!(is_tts(&k4, &tau, &tts_greedy(&k4, &tau).unwrap()));
    }

    #[test]
    fn rejects_invalid_thresholds() {
        let g = gen_path(3).unwrap();
        assert!(tts_greedy(&g, &Thresholds::constant(3, 2)).is_err());
        assert!(ts_greedy(&g, &Thresholds::constant(2, 1)).is_err());
    }

    #[test]
    fn seeded_instances_verify() {
        for i in 0..100u64 {
            let n = 10 + (i as usize % 50);
            let g = if i % 2 == 0 { gen_ba(n, 4, i).unwrap() } else { gen_er(n, 8.0 / (n - 1) as f64, i).unwrap() };
            let tau = Thresholds::strict_majority(&g);
            let sched = tts_greedy(&g, &tau).unwrap();
            assert!(is_tts(&g, &tau, &sched), "instance {i}");
            let s = ts_greedy(&g, &tau).unwrap();
            assert!(one_step_covers(&g, &tau, &s), "instance {i}");
            assert_eq!(tts_greedy(&g, &tau).unwrap(), sched);
        }
    }

    proptest! {
        #[test]
        fn outputs_verify_under_any_thresholds(n in 1usize..14, p in 0.0f64..1.0, seed in any::<u64>(), salt in any::<u64>()) {
            let g = gen_er(n, p, seed).unwrap();
            let tau = Thresholds::new(g.nodes().map(|v| {
                let d = g.degree(v) as u64;
                (salt.rotate_left(v as u32 * 7) % (d + 1)) as usize
            }).collect());
            let sched = tts_greedy(&g, &tau).unwrap();
            prop_assert!(is_tts(&g, &tau, &sched));
            let s = ts_greedy(&g, &tau).unwrap();
            prop_assert!(one_step_covers(&g, &tau, &s));
            if n <= 10 {
                prop_assert!(sched.size() >= min_tts_exact(&g, &tau, 20).unwrap().0);
            }
        }
    }
}
