//! Graph constructions relating problem variants.

use crate::graph::{Graph, NodeId, ThresholdError, Thresholds};

/// Bipartite double cover: `x_i = i`, `y_i = n + i`, with `x_i y_j` an edge
/// whenever `v_i v_j` is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCover {
    pub graph: Graph,
    pub thresholds: Thresholds,
    pub x: Vec<NodeId>,
    pub y: Vec<NodeId>,
}

pub fn bipartite_double_cover(g: &Graph, tau: &Thresholds) -> Result<DoubleCover, ThresholdError> {
    tau.validate(g)?;
    let n = g.node_count();
    let edges = g.edges().flat_map(|(i, j)| [(i, n + j), (j, n + i)]);
    let graph = Graph::new(2 * n, edges).expect("cover edges are simple");
    let mut values = tau.as_slice().to_vec();
    values.extend_from_slice(tau.as_slice());
    Ok(DoubleCover { graph, thresholds: Thresholds::new(values), x: (0..n).collect(), y: (n..2 * n).collect() })
}

/// One attached `K_2`: both nodes are adjacent to each other and to `host`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gadget {
    pub host: NodeId,
    pub pair: (NodeId, NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub thresholds: Thresholds,
    /// In id order: per original node, per gadget, the pair `(n + 2j, n + 2j + 1)`.
    pub gadgets: Vec<Gadget>,
}

/// Attaches `ceil(d(v)/2)` triangles to every node `v` of `h`. Original
/// nodes keep their thresholds; gadget nodes get threshold 1.
pub fn hardness_gadget(h: &Graph, tau: &Thresholds) -> Result<GadgetGraph, ThresholdError> {
    tau.validate(h)?;
    let n = h.node_count();
    let mut edges: Vec<(NodeId, NodeId)> = h.edges().collect();
    let mut gadgets = Vec::new();
    let mut next = n;
    for v in h.nodes() {
        for _ in 0..h.degree(v).div_ceil(2) {
            let (a, b) = (next, next + 1);
            edges.extend([(a, b), (v, a), (v, b)]);
            gadgets.push(Gadget { host: v, pair: (a, b) });
            next += 2;
        }
    }
    let mut values = tau.as_slice().to_vec();
    values.resize(next, 1);
    let graph = Graph::new(next, edges).expect("gadget edges are simple");
    Ok(GadgetGraph { graph, thresholds: Thresholds::new(values), gadgets })
}
