//! Python bindings: scenes, oriented/plain graphs, recognition, and the
//! document formats, mirroring the CLI's pipeline.
//!
//! Coordinates cross the boundary as exact `"p/q"` strings, never floats;
//! certificates and reports cross as JSON strings so Python can `json.loads`
//! them without this module inventing a second schema.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;

use burl::burling::derive_triple;
use burl::construction::{burling_sequence, stability_issues};
use burl::geom::{Rect, Region};
use burl::graph::ChromaticOutcome;
use burl::io::{graph_dot, ograph_dot, scene_svg, GraphDoc, SceneDoc};
use burl::recognize::{recognize_oriented, recognize_unoriented, DEFAULT_BUDGET};
use burl::shape::Shape;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rect_tuple(r: &Rect) -> (String, String, String, String) {
    (
        r.left().to_string(),
        r.right().to_string(),
        r.bottom().to_string(),
        r.top().to_string(),
    )
}

/// A generated (or reloaded) scene: the family at some level plus its probs.
#[pyclass]
struct Scene {
    inner: burl::construction::Scene,
}

#[pymethods]
impl Scene {
    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    #[getter]
    fn shape_count(&self) -> usize {
        self.inner.family().len()
    }

    #[getter]
    fn prob_count(&self) -> usize {
        self.inner.probs().len()
    }

    /// Shape ids in family order.
    fn shape_ids(&self) -> Vec<String> {
        self.inner
            .family()
            .shapes()
            .iter()
            .map(|s| s.id().to_string())
            .collect()
    }

    /// `(id, [(xlo, xhi, ylo, yhi), …])` per shape, coordinates as "p/q".
    fn shapes(&self) -> Vec<(String, Vec<(String, String, String, String)>)> {
        self.inner
            .family()
            .shapes()
            .iter()
            .map(|s| {
                (
                    s.id().to_string(),
                    s.region().rects().iter().map(rect_tuple).collect(),
                )
            })
            .collect()
    }

    /// `(id, (xlo, xhi, ylo, yhi))` per prob, coordinates as "p/q".
    fn probs(&self) -> Vec<(String, (String, String, String, String))> {
        self.inner
            .probs()
            .iter()
            .map(|p| (p.id.clone(), rect_tuple(&p.rect)))
            .collect()
    }

    /// True when the family passes constraints (C1)–(C6) exactly.
    fn constraints_pass(&self) -> PyResult<bool> {
        Ok(self
            .inner
            .family()
            .check_constraints()
            .map_err(value_err)?
            .passed())
    }

    /// Stability issues per prob as `(prob_id, [description, …])`; empty
    /// when every prob is stable.
    fn stability_report(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .probs()
            .iter()
            .filter_map(|p| {
                let issues = stability_issues(&p.rect, self.inner.family());
                if issues.is_empty() {
                    None
                } else {
                    Some((p.id.clone(), issues.iter().map(|i| i.to_string()).collect()))
                }
            })
            .collect()
    }

    /// The oriented intersection graph of the family.
    fn graph(&self) -> PyResult<OrientedGraph> {
        let triple = derive_triple(self.inner.family()).map_err(value_err)?;
        Ok(OrientedGraph {
            inner: triple.ograph().map_err(value_err)?,
        })
    }

    /// The scene document as JSON (exact rationals).
    fn to_json(&self) -> String {
        SceneDoc::from_scene(&self.inner).to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Scene> {
        let doc = SceneDoc::from_json(text).map_err(value_err)?;
        Ok(Scene {
            inner: doc.to_scene().map_err(value_err)?,
        })
    }

    /// Standalone SVG of the scene.
    #[pyo3(signature = (territories = false))]
    fn svg(&self, territories: bool) -> String {
        scene_svg(&self.inner, territories)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scene(level={}, shapes={}, probs={})",
            self.inner.level(),
            self.inner.family().len(),
            self.inner.probs().len()
        )
    }
}

/// An oriented graph (the form recognition consumes when the orientation
/// is fixed).
#[pyclass]
struct OrientedGraph {
    inner: burl::burling::OGraph,
}

#[pymethods]
impl OrientedGraph {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    fn vertex_ids(&self) -> Vec<String> {
        self.inner.vertex_ids().to_vec()
    }

    fn arcs(&self) -> Vec<(String, String)> {
        self.inner.arc_ids()
    }

    /// Forget directions.
    fn underlying(&self) -> Graph {
        Graph {
            inner: self.inner.underlying(),
        }
    }

    /// Recognition certificate as JSON; its `verdict` field is
    /// `"accepted"`, `"rejected"`, or `"budget_exceeded"`.
    #[pyo3(signature = (budget = None))]
    fn recognize(&self, budget: Option<u64>) -> PyResult<String> {
        let cert = recognize_oriented(&self.inner, budget.unwrap_or(DEFAULT_BUDGET));
        serde_json::to_string(&cert).map_err(value_err)
    }

    fn to_json(&self) -> String {
        GraphDoc::from_ograph(&self.inner, None).to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<OrientedGraph> {
        let doc = GraphDoc::from_json(text).map_err(value_err)?;
        Ok(OrientedGraph {
            inner: doc.to_ograph().map_err(value_err)?,
        })
    }

    fn dot(&self) -> String {
        ograph_dot(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("OrientedGraph(n={}, arcs={})", self.inner.n(), self.inner.arc_count())
    }
}

/// A plain (undirected, simple) graph.
#[pyclass]
struct Graph {
    inner: burl::graph::Graph,
}

#[pymethods]
impl Graph {
    /// Build from vertex ids and edges.
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Graph> {
        Ok(Graph {
            inner: burl::graph::Graph::new(vertices, edges).map_err(value_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn vertex_ids(&self) -> Vec<String> {
        self.inner.vertex_ids().to_vec()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner.edge_ids()
    }

    fn triangle_free(&self) -> bool {
        self.inner.triangle_free()
    }

    fn clique_number(&self) -> usize {
        self.inner.clique_number()
    }

    /// Exact chromatic number as an int, or `(lower, upper)` when the
    /// search budget runs out first.
    #[pyo3(signature = (budget = None))]
    fn chromatic_number(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<Py<PyAny>> {
        let result = self
            .inner
            .chromatic_number(budget.unwrap_or(DEFAULT_BUDGET));
        match result.outcome {
            ChromaticOutcome::Exact { chi } => chi.into_py_any(py),
            ChromaticOutcome::Bracket { lower, upper } => (lower, upper).into_py_any(py),
        }
    }

    fn induced_subgraph(&self, keep: Vec<String>) -> PyResult<Graph> {
        Ok(Graph {
            inner: self.inner.induced_subgraph(&keep).map_err(value_err)?,
        })
    }

    /// Recognition certificate as JSON, searching over orientations; its
    /// `verdict` field is `"accepted"`, `"rejected"`, or
    /// `"budget_exceeded"`.
    #[pyo3(signature = (budget = None))]
    fn recognize(&self, budget: Option<u64>) -> PyResult<String> {
        let cert = recognize_unoriented(&self.inner, budget.unwrap_or(DEFAULT_BUDGET));
        serde_json::to_string(&cert).map_err(value_err)
    }

    fn to_json(&self) -> String {
        GraphDoc::from_graph(&self.inner).to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Graph> {
        let doc = GraphDoc::from_json(text).map_err(value_err)?;
        Ok(Graph {
            inner: doc.to_graph().map_err(value_err)?,
        })
    }

    fn dot(&self) -> String {
        graph_dot(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

fn named_shape(spec: &str) -> PyResult<Shape> {
    let region = match spec {
        "frame" => Region::new(vec![
            Rect::ints(0, 0, 0, 3),
            Rect::ints(3, 3, 0, 3),
            Rect::ints(0, 3, 0, 0),
            Rect::ints(0, 3, 3, 3),
        ]),
        "gamma" => Region::new(vec![Rect::ints(0, 1, 0, 3), Rect::ints(0, 3, 0, 1)]),
        other if other.trim_start().starts_with('[') => {
            let rects: Vec<Rect> = serde_json::from_str(other).map_err(value_err)?;
            Region::new(rects)
        }
        other => {
            return Err(value_err(format!(
                "unknown shape `{other}`; expected frame, gamma, or a JSON rect list"
            )))
        }
    };
    Shape::new("base", region).map_err(value_err)
}

/// Build the level-`k` scene from a base shape: `"frame"`, `"gamma"`, or a
/// JSON list of `["xlo","xhi","ylo","yhi"]` rationals.
#[pyfunction]
fn generate(shape: &str, k: u32) -> PyResult<Scene> {
    Ok(Scene {
        inner: burling_sequence(named_shape(shape)?, k).map_err(value_err)?,
    })
}

#[pymodule]
fn burl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scene>()?;
    m.add_class::<OrientedGraph>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    Ok(())
}
