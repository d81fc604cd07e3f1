//! Simple undirected graphs with dense node ids and per-node thresholds.

use std::fmt;

use thiserror::Error;

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("node id {id} out of range for a graph with {n} nodes")]
    NodeOutOfRange { id: NodeId, n: usize },
}

/// An immutable simple undirected graph.
///
/// Adjacency lists are sorted and deduplicated; `adjacency[v]` lists the
/// neighbors of `v` in ascending order.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes. Duplicate edges (in either orientation)
    /// collapse into one.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange { id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Graph { adjacency, edge_count: degree_sum / 2 })
    }

    /// The graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n], edge_count: 0 }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// True iff every degree is even.
    pub fn is_even(&self) -> bool {
        self.adjacency.iter().all(|list| list.len() % 2 == 0)
    }

    /// Connected components, each as an ascending list of node ids, ordered by
    /// their smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().len() == 1
    }

    /// Connected and acyclic. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        let n = self.node_count();
        n >= 1 && self.edge_count + 1 == n && self.is_connected()
    }

    /// Acyclic (every component is a tree).
    pub fn is_forest(&self) -> bool {
        self.edge_count + self.components().len() == self.node_count()
    }

    /// Subgraph induced by `keep` (ascending ids). Node `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &[NodeId]) -> Graph {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&v| {
                let mut list: Vec<NodeId> =
                    self.adjacency[v].iter().filter(|&&u| index[u] != usize::MAX).map(|&u| index[u]).collect();
                list.sort_unstable();
                list
            })
            .collect::<Vec<_>>();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adjacency, edge_count }
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[NodeId]) -> Graph {
        assert_eq!(perm.len(), self.node_count(), "permutation length");
        Graph::new(self.node_count(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("a permutation of a simple graph is simple")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.node_count())
            .field("m", &self.edge_count)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("threshold vector has {got} entries but the graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("thresholds exceed degree at {} node(s): {:?}", .0.len(), .0)]
    ExceedsDegree(Vec<ThresholdViolation>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdViolation {
    pub node: NodeId,
    pub threshold: usize,
    pub degree: usize,
}

/// Per-node thresholds `tau(v)`, stored by value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Thresholds(Vec<usize>);

impl Thresholds {
    pub fn new(values: Vec<usize>) -> Self {
        Thresholds(values)
    }

    /// `tau(v) = ceil((d(v) + 1) / 2)`, except that isolated nodes get 0 so
    /// the assignment always satisfies `tau(v) <= d(v)`.
    pub fn strict_majority(g: &Graph) -> Self {
        Thresholds(g.degrees().into_iter().map(|d| if d == 0 { 0 } else { (d + 2) / 2 }).collect())
    }

    /// `tau(v) = ceil(d(v) / 2)`.
    pub fn simple_majority(g: &Graph) -> Self {
        Thresholds(g.degrees().into_iter().map(|d| d.div_ceil(2)).collect())
    }

    /// The same value for every node.
    pub fn constant(n: usize, value: usize) -> Self {
        Thresholds(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: NodeId) -> usize {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Lists every node with `tau(v) > d(v)`; an empty list means valid.
    pub fn violations(&self, g: &Graph) -> Result<Vec<ThresholdViolation>, ThresholdError> {
        if self.0.len() != g.node_count() {
            return Err(ThresholdError::LengthMismatch { expected: g.node_count(), got: self.0.len() });
        }
        Ok(self
            .0
            .iter()
            .enumerate()
            .filter(|&(v, &t)| t > g.degree(v))
            .map(|(v, &t)| ThresholdViolation { node: v, threshold: t, degree: g.degree(v) })
            .collect())
    }

    /// Checks `0 <= tau(v) <= d(v)` for all nodes.
    pub fn validate(&self, g: &Graph) -> Result<(), ThresholdError> {
        let violations = self.violations(g)?;
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ThresholdError::ExceedsDegree(violations))
        }
    }

    pub fn is_strict_majority(&self, g: &Graph) -> bool {
        *self == Thresholds::strict_majority(g)
    }

    pub fn permuted(&self, perm: &[NodeId]) -> Thresholds {
        let mut out = vec![0; self.0.len()];
        for (v, &t) in self.0.iter().enumerate() {
            out[perm[v]] = t;
        }
        Thresholds(out)
    }
}

impl From<Vec<usize>> for Thresholds {
    fn from(values: Vec<usize>) -> Self {
        Thresholds(values)
    }
}
