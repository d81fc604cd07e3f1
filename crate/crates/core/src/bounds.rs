//! Closed-form lower bounds on the minimum timed target set size.
//!
//! `n` counts non-isolated nodes only: an isolated node has threshold 0 under
//! strict majority and never needs a target.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Thresholds};
use crate::tree::forest_lower_bound_2a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    StrictMajority,
    Even,
    Tree2A,
    None,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::StrictMajority => "strict-majority",
            BoundKind::Even => "even",
            BoundKind::Tree2A => "tree-2A",
            BoundKind::None => "none",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("thresholds are not the strict majority")]
    NotStrictMajority,
    #[error("graph has a node of odd degree")]
    NotEven,
    #[error("graph is not a tree")]
    NotATree,
    #[error("thresholds are invalid for this graph")]
    InvalidThresholds,
}

fn active_nodes(g: &Graph) -> usize {
    g.nodes().filter(|&v| g.degree(v) > 0).count()
}

/// `ceil(2n / (Delta + 1))` for strict-majority thresholds.
pub fn lb_strict_majority(g: &Graph, tau: &Thresholds) -> Result<usize, BoundError> {
    if !tau.is_strict_majority(g) {
        return Err(BoundError::NotStrictMajority);
    }
    Ok((2 * active_nodes(g)).div_ceil(g.max_degree() + 1))
}

/// `ceil(4n / (Delta + 2))` for even graphs under strict majority.
pub fn lb_even(g: &Graph, tau: &Thresholds) -> Result<usize, BoundError> {
    if !g.is_even() {
        return Err(BoundError::NotEven);
    }
    if !tau.is_strict_majority(g) {
        return Err(BoundError::NotStrictMajority);
    }
    Ok((4 * active_nodes(g)).div_ceil(g.max_degree() + 2))
}

/// `2|A|` from the tree classification.
pub fn lb_tree(g: &Graph, tau: &Thresholds) -> Result<usize, BoundError> {
    if !g.is_tree() {
        return Err(BoundError::NotATree);
    }
    if tau.validate(g).is_err() {
        return Err(BoundError::InvalidThresholds);
    }
    Ok(forest_lower_bound_2a(g, tau.as_slice()))
}

/// Every bound with its applicability, in a fixed order.
pub fn all_lower_bounds(g: &Graph, tau: &Thresholds) -> Vec<(BoundKind, Result<usize, BoundError>)> {
    vec![
        (BoundKind::StrictMajority, lb_strict_majority(g, tau)),
        (BoundKind::Even, lb_even(g, tau)),
        (BoundKind::Tree2A, lb_tree(g, tau)),
    ]
}

/// Largest applicable bound; on ties the even bound wins over the strict
/// majority bound, which wins over the tree bound. `(0, None)` if nothing
/// applies.
pub fn best_lower_bound(g: &Graph, tau: &Thresholds) -> (usize, BoundKind) {
    let mut best = (0, BoundKind::None);
    for kind in [BoundKind::Even, BoundKind::StrictMajority, BoundKind::Tree2A] {
        let value = match kind {
            BoundKind::Even => lb_even(g, tau),
            BoundKind::StrictMajority => lb_strict_majority(g, tau),
            _ => lb_tree(g, tau),
        };
        if let Ok(value) = value {
            if best.1 == BoundKind::None || value > best.0 {
                best = (value, kind);
            }
        }
    }
    best
}
