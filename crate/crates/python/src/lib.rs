//! Python bindings. Library errors surface as `ValueError`.

use plg::bounds::{self, BoundId};
use plg::gadgets::{self, EmbedMode};
use plg::matching::max_cardinality_matching;
use plg::{MetricKind, NodeId};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: plg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = plg::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn kind(s: &str) -> PyResult<MetricKind> {
    match s {
        "graphic" => Ok(MetricKind::Graphic),
        "onetwo" => Ok(MetricKind::OneTwo),
        _ => Err(PyValueError::new_err(format!(
            "kind must be 'graphic' or 'onetwo', got {s:?}"
        ))),
    }
}

#[pyclass(name = "PowerLawParams", frozen)]
struct Params {
    inner: plg::PowerLawParams,
}

#[pymethods]
impl Params {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Params {
            inner: plg::PowerLawParams::new(alpha, beta).map_err(err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    /// `e^alpha`.
    #[getter]
    fn scale(&self) -> f64 {
        self.inner.scale()
    }

    #[getter]
    fn max_degree(&self) -> u64 {
        self.inner.max_degree()
    }

    fn count_at(&self, degree: u64) -> u64 {
        self.inner.count_at(degree)
    }

    /// `(degree, count)` pairs for degrees 1..=max_degree.
    #[pyo3(signature = (node_cap=None))]
    fn degree_sequence(&self, node_cap: Option<u64>) -> PyResult<Vec<(u64, u64)>> {
        let cap = node_cap.unwrap_or_else(plg::node_cap_from_env);
        Ok(plg::degree_sequence(&self.inner, cap)
            .map_err(err)?
            .iter()
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerLawParams(alpha={}, beta={})",
            self.inner.alpha(),
            self.inner.beta()
        )
    }
}

#[pyclass(name = "Graph")]
struct Graph {
    inner: plg::SimpleGraph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(nodes: usize, edges: Vec<(NodeId, NodeId)>) -> PyResult<Self> {
        Ok(Graph {
            inner: plg::SimpleGraph::from_edges(nodes, edges).map_err(err)?,
        })
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.inner.edges().collect()
    }

    fn degree(&self, v: NodeId) -> PyResult<usize> {
        if (v as usize) < self.inner.node_count() {
            Ok(self.inner.degree(v))
        } else {
            Err(PyValueError::new_err(format!("node {v} out of range")))
        }
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn largest_component(&self) -> Graph {
        Graph {
            inner: plg::largest_component(&self.inner).0,
        }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json(None)).expect("graph serializes")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Graph> {
        let doc: plg::GraphJson =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Graph {
            inner: doc.to_simple().map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, edges={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "Tour", frozen)]
struct PyTour {
    #[pyo3(get)]
    order: Vec<NodeId>,
    #[pyo3(get)]
    cost: u64,
}

#[pymethods]
impl PyTour {
    fn __repr__(&self) -> String {
        format!("Tour(cost={}, nodes={})", self.cost, self.order.len())
    }
}

impl From<plg::Tour> for PyTour {
    fn from(t: plg::Tour) -> Self {
        PyTour {
            order: t.order,
            cost: t.cost,
        }
    }
}

#[pyclass(name = "MetricInstance")]
struct Instance {
    inner: plg::MetricInstance,
}

#[pymethods]
impl Instance {
    /// `kind` is "graphic" or "onetwo".
    #[new]
    fn new(graph: &Graph, kind: &str) -> PyResult<Self> {
        Ok(Instance {
            inner: plg::build_instance(graph.inner.clone(), self::kind(kind)?).map_err(err)?,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn dist(&self, u: NodeId, v: NodeId) -> u32 {
        self.inner.dist(u, v)
    }

    /// Raises `ValueError` unless `order` visits every node once.
    fn validate(&self, order: Vec<NodeId>) -> PyResult<()> {
        self.inner.validate(&order).map_err(err)
    }

    fn cycle_cost(&self, order: Vec<NodeId>) -> PyResult<u64> {
        self.inner.validate(&order).map_err(err)?;
        Ok(self.inner.cycle_cost(&order))
    }

    /// Instance lower bound; (1,2) instances use a minimum cycle cover.
    fn lower_bound(&self) -> PyResult<u64> {
        let cover = if self.inner.kind() == MetricKind::OneTwo && self.inner.node_count() >= 3 {
            Some(plg::min_cycle_cover(&self.inner).map_err(err)?)
        } else {
            None
        };
        Ok(plg::instance_lower_bound(&self.inner, cover.as_ref())
            .map_err(err)?
            .value)
    }

    /// `alg` is one of mst, christofides, py12, contract12, exact.
    #[pyo3(signature = (alg, cap=plg::DEFAULT_EXACT_CAP))]
    fn solve(&self, alg: &str, cap: usize) -> PyResult<PyTour> {
        let inst = &self.inner;
        let tour = match alg {
            "mst" => plg::mst_double_tour(inst),
            "christofides" => plg::christofides(inst),
            "py12" => plg::onetwo::solve_py(inst).map(|(_, t)| t),
            "contract12" => plg::contract12_tour(inst).map(|r| r.tour),
            "exact" => plg::exact_optimum(inst, cap),
            _ => return Err(PyValueError::new_err(format!("unknown algorithm {alg:?}"))),
        };
        Ok(tour.map_err(err)?.into())
    }
}

/// Samples a graph, simplified; `giant` keeps the largest component.
#[pyfunction]
#[pyo3(signature = (params, seed, giant=false, node_cap=None))]
fn sample_plg(params: &Params, seed: u64, giant: bool, node_cap: Option<u64>) -> PyResult<Graph> {
    let cap = node_cap.unwrap_or_else(plg::node_cap_from_env);
    let g = plg::simplify(&plg::sample_plg(&params.inner, seed, cap).map_err(err)?);
    Ok(Graph {
        inner: if giant { plg::largest_component(&g).0 } else { g },
    })
}

/// Removable-pairing bound of a connected graph.
#[pyfunction]
fn ms_bound<'py>(py: Python<'py>, graph: &Graph) -> PyResult<Bound<'py, PyDict>> {
    let r = plg::ms_report(&graph.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("core_bound", r.bound)?;
    d.set_item("tour_bound", r.tour_bound)?;
    d.set_item("core_edges", r.core_edges)?;
    d.set_item("removable", r.removable_total)?;
    d.set_item("pairs", r.pair_total)?;
    d.set_item("pieces", r.pieces)?;
    Ok(d)
}

#[pyfunction]
fn zeta(s: f64) -> PyResult<f64> {
    plg::zeta(s).map_err(err)
}

#[pyfunction]
fn bound_ids() -> Vec<&'static str> {
    BoundId::ALL.iter().map(|id| id.as_str()).collect()
}

#[pyfunction]
fn evaluate_bound(id: &str, beta: f64) -> PyResult<f64> {
    plg::evaluate_bound(parse(id)?, beta).map_err(err)
}

/// `(beta, value)` samples on the grid lo, lo+step, ..., hi.
#[pyfunction]
fn emit_curve(id: &str, lo: f64, hi: f64, step: f64) -> PyResult<Vec<(f64, f64)>> {
    Ok(plg::emit_curve(parse(id)?, lo, hi, step).map_err(err)?.samples)
}

#[pyfunction]
fn crossover(a: &str, b: &str, lo: f64, hi: f64) -> PyResult<f64> {
    plg::crossover(parse(a)?, parse(b)?, lo, hi).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (name, step=0.01))]
fn figure_csv(name: &str, step: f64) -> PyResult<String> {
    bounds::figure_csv(name, step).map_err(err)
}

/// `{quantity: (mean, stderr or None)}` over `trials` seeded samples.
#[pyfunction]
#[pyo3(signature = (params, trials, seed, node_cap=None))]
fn run_stats<'py>(
    py: Python<'py>,
    params: &Params,
    trials: usize,
    seed: u64,
    node_cap: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let cap = node_cap.unwrap_or_else(plg::node_cap_from_env);
    let r = plg::run_stats(&params.inner, trials, seed, cap).map_err(err)?;
    let d = PyDict::new(py);
    for (k, s) in [
        ("m1", r.m1),
        ("a1", r.a1),
        ("a2", r.a2),
        ("n1_total", r.n1_total),
        ("n2_total", r.n2_total),
    ] {
        d.set_item(k, (s.mean, s.stderr))?;
    }
    Ok(d)
}

fn mode(s: &str) -> PyResult<EmbedMode> {
    s.parse().map_err(err)
}

#[pyfunction]
#[pyo3(signature = (v, beta, mode="simple"))]
fn hardness_gap<'py>(py: Python<'py>, v: usize, beta: f64, mode: &str) -> PyResult<Bound<'py, PyDict>> {
    let g = plg::hardness_gap(v, beta, self::mode(mode)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("scale", g.scale)?;
    d.set_item("yes_cost", g.yes_cost)?;
    d.set_item("no_cost", g.no_cost)?;
    d.set_item("ratio", g.ratio)?;
    d.set_item("limit", g.limit)?;
    Ok(d)
}

/// Builds the gadget graph for `v` copies and checks its certificates.
#[pyfunction]
fn gadget_certificate<'py>(py: Python<'py>, v: usize) -> PyResult<Bound<'py, PyDict>> {
    let g = gadgets::build_tsp_gadget_graph(v).map_err(err)?;
    let n = g.graph.node_count();
    let matched = max_cardinality_matching(&g.graph)
        .iter()
        .filter(|m| m.is_some())
        .count()
        / 2;
    let p = gadgets::matching_profile(&g, &g.canonical_matching).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("nodes", n)?;
    d.set_item("histogram", g.histogram())?;
    d.set_item("perfect_matching", 2 * matched == n)?;
    d.set_item("matching_profile", (p.t23, p.t33, p.t34, p.t44))?;
    Ok(d)
}

/// Packing plan summary; raises `ValueError` when the slots cannot be filled.
#[pyfunction]
fn even_degree_packing<'py>(py: Python<'py>, v: usize, beta: f64) -> PyResult<Bound<'py, PyDict>> {
    let plan = plg::even_degree_packing(v, beta, &plg::MatchingProfile::scaled(v)).map_err(err)?;
    plan.audit().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("alpha_min", plan.alpha_min)?;
    d.set_item("alpha", plan.alpha)?;
    d.set_item("retries", plan.retries)?;
    d.set_item("total_edges", plan.total_edges())?;
    Ok(d)
}

#[pymodule]
fn plgtsp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<Graph>()?;
    m.add_class::<PyTour>()?;
    m.add_class::<Instance>()?;
    m.add_function(wrap_pyfunction!(sample_plg, m)?)?;
    m.add_function(wrap_pyfunction!(ms_bound, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ids, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(emit_curve, m)?)?;
    m.add_function(wrap_pyfunction!(crossover, m)?)?;
    m.add_function(wrap_pyfunction!(figure_csv, m)?)?;
    m.add_function(wrap_pyfunction!(run_stats, m)?)?;
    m.add_function(wrap_pyfunction!(hardness_gap, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(even_degree_packing, m)?)?;
    Ok(())
}
