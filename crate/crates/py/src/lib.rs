//! Python bindings. Thresholds travel as `list[int]` and schedules as
//! `list[list[int]]`; node ids are `0..n-1`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tts_core::bounds;
use tts_core::dynamics::{default_max_steps, run_model_to_limit, Configuration, Model};
use tts_core::exact::{self, ilp};
use tts_core::generators as gens;
use tts_core::graph::{Graph, NodeId, Thresholds};
use tts_core::schedule::{self, Schedule};
use tts_core::{greedy, io, transforms, tree};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An undirected simple graph on nodes `0..n-1`.
#[pyclass(name = "Graph", module = "tts", frozen)]
struct PyGraph(Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(NodeId, NodeId)>) -> PyResult<Self> {
        Graph::new(n, edges).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn star(n: usize) -> PyResult<Self> {
        gens::gen_star(n).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        gens::gen_path(n).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        gens::gen_cycle(n).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        gens::gen_complete(n).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn complete_bipartite(a: usize, b: usize) -> PyResult<Self> {
        gens::gen_complete_bipartite(a, b).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn barabasi_albert(n: usize, m_attach: usize, seed: u64) -> PyResult<Self> {
        gens::gen_ba(n, m_attach, seed).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn erdos_renyi(n: usize, p: f64, seed: u64) -> PyResult<Self> {
        gens::gen_er(n, p, seed).map(PyGraph).map_err(value_error)
    }

    #[staticmethod]
    fn random_tree(n: usize, seed: u64) -> PyResult<Self> {
        gens::gen_random_tree(n, seed).map(PyGraph).map_err(value_error)
    }

    /// Returns the graph and the label of each node.
    #[staticmethod]
    fn read_edge_list(path: &str) -> PyResult<(Self, Vec<String>)> {
        let g = io::read_edge_list(path).map_err(value_error)?;
        Ok((PyGraph(g.graph), g.labels))
    }

    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.0.edges().collect()
    }

    fn neighbors(&self, v: NodeId) -> PyResult<Vec<NodeId>> {
        self.check(v)?;
        Ok(self.0.neighbors(v).to_vec())
    }

    fn degree(&self, v: NodeId) -> PyResult<usize> {
        self.check(v)?;
        Ok(self.0.degree(v))
    }

    fn is_tree(&self) -> bool {
        self.0.is_tree()
    }

    fn strict_majority(&self) -> Vec<usize> {
        Thresholds::strict_majority(&self.0).into_vec()
    }

    fn simple_majority(&self) -> Vec<usize> {
        Thresholds::simple_majority(&self.0).into_vec()
    }

    fn __len__(&self) -> usize {
        self.0.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.node_count(), self.0.edge_count())
    }
}

impl PyGraph {
    fn check(&self, v: NodeId) -> PyResult<()> {
        if v < self.0.node_count() {
            Ok(())
        } else {
            Err(value_error(format!("node {v} out of range")))
        }
    }
}

fn thresholds(g: &PyGraph, tau: Vec<usize>) -> PyResult<Thresholds> {
    if tau.len() != g.0.node_count() {
        return Err(value_error(format!("{} thresholds for {} nodes", tau.len(), g.0.node_count())));
    }
    let tau = Thresholds::new(tau);
    tau.validate(&g.0).map_err(value_error)?;
    Ok(tau)
}

fn model(progressive: bool) -> Model {
    if progressive {
        Model::Progressive
    } else {
        Model::NonProgressive
    }
}

/// True iff `schedule` is a timed target set.
#[pyfunction]
fn is_tts(g: &PyGraph, tau: Vec<usize>, schedule: Vec<Vec<NodeId>>) -> PyResult<bool> {
    let tau = thresholds(g, tau)?;
    Ok(schedule::is_tts(&g.0, &tau, &Schedule::new(schedule)))
}

/// Raises `ValueError` with the rejection reason unless `schedule` is a
/// timed target set; returns its size otherwise.
#[pyfunction]
fn verify_tts(g: &PyGraph, tau: Vec<usize>, schedule: Vec<Vec<NodeId>>) -> PyResult<usize> {
    let tau = thresholds(g, tau)?;
    let sched = Schedule::new(schedule);
    schedule::verify_tts(&g.0, &tau, &sched).map_err(value_error)?;
    Ok(sched.size())
}

#[pyfunction]
#[pyo3(signature = (g, tau, initial, progressive = false, max_steps = None))]
fn simulate(
    g: &PyGraph,
    tau: Vec<usize>,
    initial: Vec<NodeId>,
    progressive: bool,
    max_steps: Option<usize>,
) -> PyResult<(usize, usize, bool)> {
    let tau = thresholds(g, tau)?;
    for &v in &initial {
        g.check(v)?;
    }
    let conf = Configuration::from_nodes(g.0.node_count(), initial);
    let steps = max_steps.unwrap_or_else(|| default_max_steps(&g.0));
    let orbit = run_model_to_limit(&g.0, &tau, &conf, model(progressive), steps, false).map_err(value_error)?;
    Ok((orbit.transient_length, orbit.cycle_length, orbit.saw_all_positive))
}

#[pyfunction]
fn tts_greedy(g: &PyGraph, tau: Vec<usize>) -> PyResult<Vec<Vec<NodeId>>> {
    let tau = thresholds(g, tau)?;
    Ok(greedy::tts_greedy(&g.0, &tau).map_err(value_error)?.into_sets())
}

#[pyfunction]
fn ts_greedy(g: &PyGraph, tau: Vec<usize>) -> PyResult<Vec<NodeId>> {
    let tau = thresholds(g, tau)?;
    greedy::ts_greedy(&g.0, &tau).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (g, tau, node_cap = exact::DEFAULT_TTS_CAP))]
fn min_tts_exact(g: &PyGraph, tau: Vec<usize>, node_cap: usize) -> PyResult<(usize, Vec<Vec<NodeId>>)> {
    let tau = thresholds(g, tau)?;
    let (size, sched) = exact::min_tts_exact(&g.0, &tau, node_cap).map_err(value_error)?;
    Ok((size, sched.into_sets()))
}

#[pyfunction]
#[pyo3(signature = (g, tau, node_cap = exact::DEFAULT_DTTS_CAP))]
fn min_dtts_exact(g: &PyGraph, tau: Vec<usize>, node_cap: usize) -> PyResult<(usize, Vec<Vec<NodeId>>)> {
    let tau = thresholds(g, tau)?;
    let (size, sched) = exact::min_dtts_exact(&g.0, &tau, node_cap).map_err(value_error)?;
    Ok((size, sched.into_sets()))
}

#[pyfunction]
#[pyo3(signature = (g, tau, progressive = false, node_cap = exact::DEFAULT_TS_CAP))]
fn min_ts_exact(g: &PyGraph, tau: Vec<usize>, progressive: bool, node_cap: usize) -> PyResult<(usize, Vec<NodeId>)> {
    let tau = thresholds(g, tau)?;
    exact::min_ts_exact(&g.0, &tau, model(progressive), node_cap).map_err(value_error)
}

#[pyfunction]
fn min_tts_tree(g: &PyGraph, tau: Vec<usize>) -> PyResult<usize> {
    let tau = thresholds(g, tau)?;
    tree::min_tts_tree_size(&g.0, &tau).map_err(value_error)
}

#[pyfunction]
fn construct_tts_tree(g: &PyGraph, tau: Vec<usize>) -> PyResult<Vec<Vec<NodeId>>> {
    let tau = thresholds(g, tau)?;
    Ok(tree::construct_tts_tree(&g.0, &tau).map_err(value_error)?.into_sets())
}

/// `(value, kind)` of the largest applicable lower bound.
#[pyfunction]
fn best_lower_bound(g: &PyGraph, tau: Vec<usize>) -> PyResult<(usize, String)> {
    let tau = thresholds(g, tau)?;
    let (value, kind) = bounds::best_lower_bound(&g.0, &tau);
    Ok((value, kind.name().to_string()))
}

#[pyfunction]
fn double_cover(g: &PyGraph, tau: Vec<usize>) -> PyResult<(PyGraph, Vec<usize>)> {
    let tau = thresholds(g, tau)?;
    let c = transforms::bipartite_double_cover(&g.0, &tau).map_err(value_error)?;
    Ok((PyGraph(c.graph), c.thresholds.into_vec()))
}

#[pyfunction]
fn hardness_gadget(g: &PyGraph, tau: Vec<usize>) -> PyResult<(PyGraph, Vec<usize>)> {
    let tau = thresholds(g, tau)?;
    let h = transforms::hardness_gadget(&g.0, &tau).map_err(value_error)?;
    Ok((PyGraph(h.graph), h.thresholds.into_vec()))
}

/// The horizon-`k` ILP in LP format.
#[pyfunction]
fn ilp_lp(g: &PyGraph, tau: Vec<usize>, k: usize) -> PyResult<String> {
    let tau = thresholds(g, tau)?;
    Ok(ilp::emit_ilp(&g.0, &tau, k).to_lp_string())
}

#[pymodule]
fn tts(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(is_tts, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tts, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(tts_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(ts_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(min_tts_exact, m)?)?;
    m.add_function(wrap_pyfunction!(min_dtts_exact, m)?)?;
    m.add_function(wrap_pyfunction!(min_ts_exact, m)?)?;
    m.add_function(wrap_pyfunction!(min_tts_tree, m)?)?;
    m.add_function(wrap_pyfunction!(construct_tts_tree, m)?)?;
    m.add_function(wrap_pyfunction!(best_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(double_cover, m)?)?;
    m.add_function(wrap_pyfunction!(hardness_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(ilp_lp, m)?)?;
    Ok(())
}
