//! Abstract Burling sets: triples `(elements, ≺, ↷)` and the four axioms.
//!
//! A triple is a *Burling set* when `≺` is a strict partial order, `↷` (the
//! arc relation of an oriented graph) has no directed cycles — cycles of
//! length one and two included — and:
//!
//! * (A1) `x ≺ y` and `x ≺ z` imply `y`, `z` are ≺-comparable;
//! * (A2) `x ↷ y` and `x ↷ z` imply `y`, `z` are ≺-comparable;
//! * (A3) `x ↷ y` and `x ≺ z` imply `y ≺ z`;
//! * (A4) `x ↷ y` and `y ≺ z` imply `x ↷ z` or `x ≺ z`.
//!
//! Enumeration conventions. The comparability conclusions of (A1)/(A2) are
//! read over distinct `y ≠ z` only — an element is comparable to itself, and
//! the degenerate instance read literally (`y ≺ y`) would outlaw every
//! non-empty order, including the geometric triples the axioms are modeled
//! on. (A3) and (A4), by contrast, are enumerated over *all* `z`: their
//! conclusions are genuine relation facts, and the boundary instances carry
//! real content — (A3) with `z = y` forbids `x ↷ y ∧ x ≺ y` (it would need
//! `y ≺ y`), and (A4) with `z = x` forbids the mixed two-cycle
//! `x ↷ y ∧ y ≺ x`. Those two instances are load-bearing: together with
//! acyclicity of `↷` they make every orientation of a triangle fail, which
//! is exactly the triangle-freeness of the class.
//!
//! [`derive_triple`] extracts the triple geometrically from a constrained
//! family; by the theory it then passes [`check_axioms`] — which is exactly
//! what the test suites re-verify.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};
use crate::relations::{Family, FamilyError};

/// A finite oriented graph with string-labeled vertices, loop-free and
/// simple by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OGraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    arcs: BTreeSet<(usize, usize)>,
}

impl OGraph {
    pub fn new(
        vertices: Vec<String>,
        arcs: Vec<(String, String)>,
    ) -> Result<OGraph, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            let ui = *index
                .get(&u)
                .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let vi = *index
                .get(&v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            if ui == vi {
                return Err(GraphError::LoopArc(u));
            }
            set.insert((ui, vi));
        }
        Ok(OGraph {
            vertices,
            index,
            arcs: set,
        })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id_of(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_ids(&self) -> Vec<(String, String)> {
        self.arcs
            .iter()
            .map(|&(u, v)| (self.vertices[u].clone(), self.vertices[v].clone()))
            .collect()
    }

    /// The underlying undirected simple graph.
    pub fn underlying(&self) -> Graph {
        let edges = self
            .arcs
            .iter()
            .map(|&(u, v)| {
                (
                    self.vertices[u.min(v)].clone(),
                    self.vertices[u.max(v)].clone(),
                )
            })
            .collect();
        Graph::new(self.vertices.clone(), edges).expect("valid by construction")
    }

    /// Some directed cycle of the arc relation, if one exists (length-2
    /// cycles count; loops are unrepresentable here). Deterministic.
    pub fn directed_cycle(&self) -> Option<Vec<String>> {
        directed_cycle_of(self.n(), |u, v| self.has_arc(u, v))
            .map(|c| c.into_iter().map(|i| self.vertices[i].clone()).collect())
    }
}

/// Generic cycle finder over an adjacency predicate; returns vertex indices
/// of one directed cycle in deterministic order.
fn directed_cycle_of(n: usize, has_arc: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut color = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(
        u: usize,
        n: usize,
        has_arc: &impl Fn(usize, usize) -> bool,
        color: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[u] = 1;
        stack.push(u);
        for v in 0..n {
            if !has_arc(u, v) {
                continue;
            }
            if color[v] == 1 {
                let pos = stack.iter().position(|&w| w == v).expect("on stack");
                return Some(stack[pos..].to_vec());
            }
            if color[v] == 0 {
                if let Some(c) = dfs(v, n, has_arc, color, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        color[u] = 2;
        None
    }
    for s in 0..n {
        if color[s] == 0 {
            if let Some(c) = dfs(s, n, &has_arc, &mut color, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// A candidate Burling set: elements with a `≺` relation and an `↷` relation,
/// both stored as ordered index pairs. Nothing is assumed — run
/// [`check_axioms`] to validate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    elements: Vec<String>,
    prec: BTreeSet<(usize, usize)>,
    arrow: BTreeSet<(usize, usize)>,
}

impl Triple {
    pub fn new(
        elements: Vec<String>,
        prec: Vec<(String, String)>,
        arrow: Vec<(String, String)>,
    ) -> Result<Triple, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in elements.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let resolve = |pairs: Vec<(String, String)>| -> Result<BTreeSet<(usize, usize)>, GraphError> {
            pairs
                .into_iter()
                .map(|(u, v)| {
                    let ui = *index
                        .get(&u)
                        .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
                    let vi = *index
                        .get(&v)
                        .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
                    Ok((ui, vi))
                })
                .collect()
        };
        Ok(Triple {
            elements,
            prec: resolve(prec)?,
            arrow: resolve(arrow)?,
        })
    }

    pub fn from_indices(
        elements: Vec<String>,
        prec: BTreeSet<(usize, usize)>,
        arrow: BTreeSet<(usize, usize)>,
    ) -> Triple {
        for &(u, v) in prec.iter().chain(arrow.iter()) {
            assert!(u < elements.len() && v < elements.len(), "index out of range");
        }
        Triple {
            elements,
            prec,
            arrow,
        }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn prec(&self) -> &BTreeSet<(usize, usize)> {
        &self.prec
    }

    pub fn arrow(&self) -> &BTreeSet<(usize, usize)> {
        &self.arrow
    }

    pub fn prec_ids(&self) -> Vec<(String, String)> {
        self.prec
            .iter()
            .map(|&(u, v)| (self.elements[u].clone(), self.elements[v].clone()))
            .collect()
    }

    pub fn arrow_ids(&self) -> Vec<(String, String)> {
        self.arrow
            .iter()
            .map(|&(u, v)| (self.elements[u].clone(), self.elements[v].clone()))
            .collect()
    }

    /// The oriented graph carried by the arrow relation.
    pub fn ograph(&self) -> Result<OGraph, GraphError> {
        OGraph::new(self.elements.clone(), self.arrow_ids())
    }

    /// Pairs sitting in both `≺` and `↷`. A valid Burling set never has
    /// one — the `z = y` instance of (A3) rules it out — so a non-empty
    /// answer pinpoints which pairs to look at when the axioms fail.
    pub fn overlapping_pairs(&self) -> Vec<(String, String)> {
        self.prec
            .intersection(&self.arrow)
            .map(|&(u, v)| (self.elements[u].clone(), self.elements[v].clone()))
            .collect()
    }
}

/// One way a triple fails to be a Burling set. Ids are element labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AxiomViolation {
    /// `x ≺ x`.
    PrecReflexive { x: String },
    /// `x ≺ y` and `y ≺ x` for distinct `x`, `y`.
    PrecNotAntisymmetric { x: String, y: String },
    /// `x ≺ y ≺ z` but not `x ≺ z` (for `z ≠ x`).
    PrecNotTransitive { x: String, y: String, z: String },
    /// A directed cycle in `↷` (one- and two-element cycles count).
    ArrowCycle { cycle: Vec<String> },
    /// `x ≺ y`, `x ≺ z`, but `y`, `z` are not ≺-comparable.
    A1 { x: String, y: String, z: String },
    /// `x ↷ y`, `x ↷ z`, but `y`, `z` are not ≺-comparable.
    A2 { x: String, y: String, z: String },
    /// `x ↷ y`, `x ≺ z`, but not `y ≺ z`.
    A3 { x: String, y: String, z: String },
    /// `x ↷ y`, `y ≺ z`, but neither `x ↷ z` nor `x ≺ z`.
    A4 { x: String, y: String, z: String },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::PrecReflexive { x } => write!(f, "≺ is reflexive at {x}"),
            AxiomViolation::PrecNotAntisymmetric { x, y } => {
                write!(f, "≺ has a two-cycle {x} ≺ {y} ≺ {x}")
            }
            AxiomViolation::PrecNotTransitive { x, y, z } => {
                write!(f, "≺ is not transitive: {x} ≺ {y} ≺ {z} but not {x} ≺ {z}")
            }
            AxiomViolation::ArrowCycle { cycle } => {
                write!(f, "↷ has a directed cycle {}", cycle.join(" ↷ "))
            }
            AxiomViolation::A1 { x, y, z } => {
                write!(f, "(A1) fails: {x} ≺ {y}, {x} ≺ {z}, {y}/{z} incomparable")
            }
            AxiomViolation::A2 { x, y, z } => {
                write!(f, "(A2) fails: {x} ↷ {y}, {x} ↷ {z}, {y}/{z} incomparable")
            }
            AxiomViolation::A3 { x, y, z } => {
                write!(f, "(A3) fails: {x} ↷ {y}, {x} ≺ {z}, but not {y} ≺ {z}")
            }
            AxiomViolation::A4 { x, y, z } => {
                write!(
                    f,
                    "(A4) fails: {x} ↷ {y}, {y} ≺ {z}, but neither {x} ↷ {z} nor {x} ≺ {z}"
                )
            }
        }
    }
}

/// Hard cap on reported violations; checking continues to the cap and stops.
pub const MAX_AXIOM_VIOLATIONS: usize = 256;

/// Verifies that a triple is a Burling set. Returns all violations found
/// (up to [`MAX_AXIOM_VIOLATIONS`]); an empty list certifies the triple.
pub fn check_axioms(t: &Triple) -> Vec<AxiomViolation> {
    let n = t.elements.len();
    let id = |i: usize| t.elements[i].clone();
    let mut prec = vec![vec![false; n]; n];
    for &(u, v) in &t.prec {
        prec[u][v] = true;
    }
    let mut arrow = vec![vec![false; n]; n];
    for &(u, v) in &t.arrow {
        arrow[u][v] = true;
    }
    let mut out = Vec::new();
    macro_rules! push {
        ($v:expr) => {
            out.push($v);
            if out.len() >= MAX_AXIOM_VIOLATIONS {
                return out;
            }
        };
    }

    // Strict partial order.
    for x in 0..n {
        if prec[x][x] {
            push!(AxiomViolation::PrecReflexive { x: id(x) });
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if prec[x][y] && prec[y][x] {
                push!(AxiomViolation::PrecNotAntisymmetric { x: id(x), y: id(y) });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !prec[x][y] || y == x {
                continue;
            }
            for z in 0..n {
                // z = x is the antisymmetry case, reported above.
                if z != x && z != y && prec[y][z] && !prec[x][z] {
                    push!(AxiomViolation::PrecNotTransitive {
                        x: id(x),
                        y: id(y),
                        z: id(z),
                    });
                }
            }
        }
    }

    // Arrow acyclicity (self-arcs are representable in a raw triple).
    let cycle = (0..n)
        .find(|&x| arrow[x][x])
        .map(|x| vec![x])
        .or_else(|| directed_cycle_of(n, |u, v| arrow[u][v]));
    if let Some(c) = cycle {
        push!(AxiomViolation::ArrowCycle {
            cycle: c.into_iter().map(id).collect(),
        });
    }

    // (A1): common ≺-successors must be ≺-comparable.
    for x in 0..n {
        for y in 0..n {
            if !prec[x][y] {
                continue;
            }
            for z in y + 1..n {
                if prec[x][z] && !prec[y][z] && !prec[z][y] {
                    push!(AxiomViolation::A1 {
                        x: id(x),
                        y: id(y),
                        z: id(z),
                    });
                }
            }
        }
    }
    // (A2): common ↷-successors must be ≺-comparable.
    for x in 0..n {
        for y in 0..n {
            if !arrow[x][y] {
                continue;
            }
            for z in y + 1..n {
                if arrow[x][z] && !prec[y][z] && !prec[z][y] {
                    push!(AxiomViolation::A2 {
                        x: id(x),
                        y: id(y),
                        z: id(z),
                    });
                }
            }
        }
    }

    // (A3): x ↷ y and x ≺ z force y ≺ z. All z, z = y included: that
    // instance forbids x ↷ y ∧ x ≺ y (it would need y ≺ y).
    for x in 0..n {
        for y in 0..n {
            if !arrow[x][y] {
                continue;
            }
            for z in 0..n {
                if prec[x][z] && !prec[y][z] {
                    push!(AxiomViolation::A3 {
                        x: id(x),
                        y: id(y),
                        z: id(z),
                    });
                }
            }
        }
    }

    // (A4): x ↷ y and y ≺ z force x ↷ z or x ≺ z. All z, z = x included:
    // that instance forbids the mixed two-cycle x ↷ y ∧ y ≺ x.
    for x in 0..n {
        for y in 0..n {
            if !arrow[x][y] {
                continue;
            }
            for z in 0..n {
                if prec[y][z] && !arrow[x][z] && !prec[x][z] {
                    push!(AxiomViolation::A4 {
                        x: id(x),
                        y: id(y),
                        z: id(z),
                    });
                }
            }
        }
    }
    out
}

/// Extracts the geometric triple `(F, ≺, ↷)` of a family.
///
/// The family must satisfy (C1)–(C5); those constraints are re-verified here
/// because they are exactly what makes the extracted triple a Burling set.
pub fn derive_triple(f: &Family) -> Result<Triple, FamilyError> {
    let report = f.check_constraints_c1_c5();
    if !report.passed() {
        return Err(FamilyError::NotConstrained {
            report: Box::new(report),
        });
    }
    let n = f.len();
    let inter = f.intersection_matrix();
    let arrow_m = f.arrow_matrix(&inter);
    let prec_m = f.prec_matrix();
    let mut prec = BTreeSet::new();
    let mut arrow = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if prec_m[i][j] {
                prec.insert((i, j));
            }
            if arrow_m[i][j] {
                arrow.insert((i, j));
            }
        }
    }
    let elements = f.shapes().iter().map(|s| s.id().to_string()).collect();
    Ok(Triple::from_indices(elements, prec, arrow))
}
