//! The relations `≺` and `↷` on strong Pouna shapes, families, and the
//! constraint battery (C1)–(C6).
//!
//! For strong shapes `A`, `B`:
//!
//! * `A ≺ B` ("A is in the territory of B") iff `box(A) ⊆ Ter(B)`;
//! * `A ↷ B` ("A enters B from the right") iff `A ∩ B ≠ ∅`,
//!   `l(B) ≤ l(A) < r(B) < r(A)`, `b(B) < b(A) < t(A) < t(B)`, and the left
//!   edge set of `A` is contained in `Ter(B)`.
//!
//! A *constrained family* additionally satisfies:
//!
//! * (C1) distinct intersecting shapes are ↷-related one way or the other;
//! * (C2) if `A ∩ B = ∅` but `A ∩ Ter(B) ≠ ∅`, then `A ≺ B`;
//! * (C3) for distinct intersecting `A`, `B`, no shape lies inside
//!   `Ter(A) ∩ Ter(B)`;
//! * (C4) no triple with `A ≺ B`, `A ↷ C`, `B ↷ C`;
//! * (C5) no three pairwise intersecting shapes;
//! * (C6) every shape is a positive transformed copy of the family's base
//!   (the base itself when strong, otherwise its horizontal reflection).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burling::OGraph;
use crate::geom::{Rect, Transform};
use crate::shape::{territories_overlap, Shape, ShapeError};

/// Errors from family construction and constraint checking.
#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family must be non-empty")]
    Empty,
    #[error("duplicate shape id `{0}`")]
    DuplicateId(String),
    #[error("shape `{0}` is not strong; families contain strong shapes only")]
    NotStrong(String),
    #[error("constraint C6 requested but the family records no base shape")]
    NoBase,
    #[error(
        "intersecting shapes `{a}` and `{b}` are not ↷-related either way; \
         the oriented intersection graph is undefined (C1 fails)"
    )]
    NotC1 { a: String, b: String },
    #[error("family is not constrained: {}", .report.failure_summary())]
    NotConstrained { report: Box<ConstraintReport> },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// `A ≺ B`: the bounding box of `A` lies inside the territory of `B`.
///
/// Every positive answer is sanity-checked against the order's basic
/// consequences: `r(A) < r(B)` and `h(A) ≤ h(B)`.
pub fn prec(a: &Shape, b: &Shape) -> bool {
    // Ter(B) ⊆ box(B), so box containment is a sound prefilter.
    if !b.bbox().contains_rect(a.bbox()) {
        return false;
    }
    let holds = b.rect_in_territory(a.bbox());
    if holds {
        assert!(
            a.bbox().right() < b.bbox().right(),
            "prec({}, {}) holds but r(A) ≥ r(B)",
            a.id(),
            b.id()
        );
        assert!(
            a.bbox().height() <= b.bbox().height(),
            "prec({}, {}) holds but h(A) > h(B)",
            a.id(),
            b.id()
        );
    }
    holds
}

/// `A ∩ B ≠ ∅`, with a bounding-box prefilter.
pub fn intersects(a: &Shape, b: &Shape) -> bool {
    a.bbox().intersects(b.bbox()) && a.region().intersects(b.region())
}

/// `A ↷ B`: the five-part directed intersection pattern.
pub fn arrow(a: &Shape, b: &Shape) -> bool {
    let (ba, bb) = (a.bbox(), b.bbox());
    let x_pattern = bb.left() <= ba.left() && ba.left() < bb.right() && bb.right() < ba.right();
    let y_pattern = bb.bottom() < ba.bottom() && ba.top() < bb.top();
    x_pattern
        && y_pattern
        && a.region().intersects(b.region())
        && b.region_in_territory(&a.left_edge_set())
}

/// Any of `A ↷ B`, `B ↷ A`, `A ≺ B`, `B ≺ A`.
pub fn comparable(a: &Shape, b: &Shape) -> bool {
    arrow(a, b) || arrow(b, a) || prec(a, b) || prec(b, a)
}

/// The base shape a constrained S-family is built from: the original shape
/// plus the strong representative actually copied (the shape itself, or its
/// horizontal reflection when the shape is not strong).
#[derive(Clone, Debug)]
pub struct FamilyBase {
    original: Shape,
    reflected: bool,
    effective: Shape,
}

impl FamilyBase {
    pub fn new(original: Shape) -> Result<FamilyBase, ShapeError> {
        let (effective, reflected) = original.clone().strongify()?;
        Ok(FamilyBase {
            original,
            reflected,
            effective,
        })
    }

    pub fn original(&self) -> &Shape {
        &self.original
    }

    /// Whether the effective base is the horizontal reflection.
    pub fn reflected(&self) -> bool {
        self.reflected
    }

    /// The strong shape every family member must be a positive copy of.
    pub fn effective(&self) -> &Shape {
        &self.effective
    }
}

/// A non-empty family of strong Pouna shapes with unique ids, optionally
/// carrying the base shape for (C6).
#[derive(Clone, Debug)]
pub struct Family {
    shapes: Vec<Shape>,
    base: Option<FamilyBase>,
}

impl Family {
    pub fn new(shapes: Vec<Shape>, base: Option<FamilyBase>) -> Result<Family, FamilyError> {
        if shapes.is_empty() {
            return Err(FamilyError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        for s in &shapes {
            if !seen.insert(s.id().to_string()) {
                return Err(FamilyError::DuplicateId(s.id().to_string()));
            }
            if !s.is_strong() {
                return Err(FamilyError::NotStrong(s.id().to_string()));
            }
        }
        Ok(Family { shapes, base })
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn base(&self) -> Option<&FamilyBase> {
        self.base.as_ref()
    }

    pub fn shape_by_id(&self, id: &str) -> Option<&Shape> {
        self.shapes.iter().find(|s| s.id() == id)
    }

    /// The family's bounding box `box(F)`.
    pub fn bbox(&self) -> Rect {
        let mut it = self.shapes.iter();
        let first = it.next().expect("family non-empty").bbox().clone();
        it.fold(first, |acc, s| acc.bounding(s.bbox()))
    }

    /// Exact evaluation of (C1)–(C5).
    pub fn check_constraints_c1_c5(&self) -> ConstraintReport {
        let mut checks = vec![
            ConstraintCheck::new(ConstraintId::C1),
            ConstraintCheck::new(ConstraintId::C2),
            ConstraintCheck::new(ConstraintId::C3),
            ConstraintCheck::new(ConstraintId::C4),
            ConstraintCheck::new(ConstraintId::C5),
        ];
        let n = self.shapes.len();
        let inter = self.intersection_matrix();

        // C1: intersecting pairs must carry an arrow one way or the other.
        for i in 0..n {
            for j in i + 1..n {
                if inter[i][j]
                    && !arrow(&self.shapes[i], &self.shapes[j])
                    && !arrow(&self.shapes[j], &self.shapes[i])
                {
                    checks[0].record([i, j].map(|k| self.shapes[k].id().to_string()));
                }
            }
        }
        // C2: disjoint pairs meeting the other's territory must be ≺-related.
        for i in 0..n {
            for j in 0..n {
                if i == j || inter[i][j] {
                    continue;
                }
                let (a, b) = (&self.shapes[i], &self.shapes[j]);
                if a.bbox().intersects(b.bbox())
                    && b.region_meets_territory(a.region())
                    && !prec(a, b)
                {
                    checks[1].record([a.id().to_string(), b.id().to_string()]);
                }
            }
        }
        // C3: no shape inside the common territory of an intersecting pair.
        let in_ter = self.territory_containment_matrix();
        for i in 0..n {
            for j in i + 1..n {
                if !inter[i][j] {
                    continue;
                }
                for c in 0..n {
                    if c != i && c != j && in_ter[c][i] && in_ter[c][j] {
                        checks[2].record(
                            [i, j, c].map(|k| self.shapes[k].id().to_string()),
                        );
                    }
                }
            }
        }
        // C4: forbid A ≺ B with both A ↷ C and B ↷ C.
        let prec_m = self.prec_matrix();
        let arrow_m = self.arrow_matrix(&inter);
        for a in 0..n {
            for b in 0..n {
                if !prec_m[a][b] {
                    continue;
                }
                for c in 0..n {
                    if arrow_m[a][c] && arrow_m[b][c] {
                        checks[3].record(
                            [a, b, c].map(|k| self.shapes[k].id().to_string()),
                        );
                    }
                }
            }
        }
        // C5: no three pairwise intersecting shapes.
        for i in 0..n {
            for j in i + 1..n {
                if !inter[i][j] {
                    continue;
                }
                for k in j + 1..n {
                    if inter[i][k] && inter[j][k] {
                        checks[4].record(
                            [i, j, k].map(|m| self.shapes[m].id().to_string()),
                        );
                    }
                }
            }
        }
        ConstraintReport {
            mode: CheckMode::Exact,
            results: checks.into_iter().map(ConstraintCheck::finish).collect(),
        }
    }

    /// Exact evaluation of all six constraints; requires a recorded base.
    pub fn check_constraints(&self) -> Result<ConstraintReport, FamilyError> {
        let base = self.base.as_ref().ok_or(FamilyError::NoBase)?;
        let mut report = self.check_constraints_c1_c5();
        let mut c6 = ConstraintCheck::new(ConstraintId::C6);
        for s in &self.shapes {
            if positive_copy_transform(base.effective(), s).is_none() {
                c6.record([s.id().to_string()]);
            }
        }
        report.results.push(c6.finish());
        Ok(report)
    }

    /// Randomized evaluation: C1/C2 on `samples` random pairs, C3/C4/C5 on
    /// `samples` random triples (per-constraint condition checked on every
    /// permutation of the draw), C6 exactly (it is linear in the family).
    /// Deterministic for a fixed `seed`.
    pub fn check_constraints_sampled(
        &self,
        samples: u32,
        seed: u64,
    ) -> Result<ConstraintReport, FamilyError> {
        let base = self.base.as_ref().ok_or(FamilyError::NoBase)?;
        let n = self.shapes.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checks = vec![
            ConstraintCheck::new(ConstraintId::C1),
            ConstraintCheck::new(ConstraintId::C2),
            ConstraintCheck::new(ConstraintId::C3),
            ConstraintCheck::new(ConstraintId::C4),
            ConstraintCheck::new(ConstraintId::C5),
        ];
        if n >= 2 {
            for _ in 0..samples {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i == j {
                    continue;
                }
                let (a, b) = (&self.shapes[i], &self.shapes[j]);
                if intersects(a, b) {
                    if !arrow(a, b) && !arrow(b, a) {
                        checks[0].record([a.id().to_string(), b.id().to_string()]);
                    }
                } else {
                    for (x, y) in [(a, b), (b, a)] {
                        if x.bbox().intersects(y.bbox())
                            && y.region_meets_territory(x.region())
                            && !prec(x, y)
                        {
                            checks[1].record([x.id().to_string(), y.id().to_string()]);
                        }
                    }
                }
            }
        }
        if n >= 3 {
            for _ in 0..samples {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                let k = rng.random_range(0..n);
                if i == j || j == k || i == k {
                    continue;
                }
                let tri = [i, j, k];
                let pairwise: Vec<bool> = [(i, j), (i, k), (j, k)]
                    .iter()
                    .map(|&(x, y)| intersects(&self.shapes[x], &self.shapes[y]))
                    .collect();
                // C5 on the unordered triple.
                if pairwise.iter().all(|&b| b) {
                    checks[4].record(tri.map(|m| self.shapes[m].id().to_string()));
                }
                // C3 over the ordered roles (A,B,C): A ∩ B ≠ ∅, C ⊆ common territory.
                for &(x, y, c) in &[(i, j, k), (i, k, j), (j, k, i)] {
                    if intersects(&self.shapes[x], &self.shapes[y])
                        && self.shapes[x].region_in_territory(self.shapes[c].region())
                        && self.shapes[y].region_in_territory(self.shapes[c].region())
                    {
                        checks[2].record(
                            [x, y, c].map(|m| self.shapes[m].id().to_string()),
                        );
                    }
                }
                // C4 over all ordered role assignments.
                for &(a, b, c) in &[
                    (i, j, k),
                    (i, k, j),
                    (j, i, k),
                    (j, k, i),
                    (k, i, j),
                    (k, j, i),
                ] {
                    if prec(&self.shapes[a], &self.shapes[b])
                        && arrow(&self.shapes[a], &self.shapes[c])
                        && arrow(&self.shapes[b], &self.shapes[c])
                    {
                        checks[3].record(
                            [a, b, c].map(|m| self.shapes[m].id().to_string()),
                        );
                    }
                }
            }
        }
        let mut c6 = ConstraintCheck::new(ConstraintId::C6);
        for s in &self.shapes {
            if positive_copy_transform(base.effective(), s).is_none() {
                c6.record([s.id().to_string()]);
            }
        }
        checks.push(c6);
        Ok(ConstraintReport {
            mode: CheckMode::Sampled { samples, seed },
            results: checks.into_iter().map(ConstraintCheck::finish).collect(),
        })
    }

    /// The oriented intersection graph: vertices are shape ids, with an arc
    /// `A → B` whenever `A ↷ B`. Defined only for families satisfying (C1).
    pub fn oriented_intersection_graph(&self) -> Result<OGraph, FamilyError> {
        let n = self.shapes.len();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.shapes[i], &self.shapes[j]);
                if !intersects(a, b) {
                    continue;
                }
                let ab = arrow(a, b);
                let ba = arrow(b, a);
                if !ab && !ba {
                    return Err(FamilyError::NotC1 {
                        a: a.id().to_string(),
                        b: b.id().to_string(),
                    });
                }
                if ab {
                    arcs.push((a.id().to_string(), b.id().to_string()));
                }
                if ba {
                    arcs.push((b.id().to_string(), a.id().to_string()));
                }
            }
        }
        let vertices = self.shapes.iter().map(|s| s.id().to_string()).collect();
        Ok(OGraph::new(vertices, arcs).expect("ids unique, no loops by construction"))
    }

    /// Symmetric matrix of pairwise intersection.
    pub fn intersection_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.shapes.len();
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if intersects(&self.shapes[i], &self.shapes[j]) {
                    m[i][j] = true;
                    m[j][i] = true;
                }
            }
        }
        m
    }

    /// Matrix of `prec(i, j)`.
    pub fn prec_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.shapes.len();
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && prec(&self.shapes[i], &self.shapes[j]) {
                    m[i][j] = true;
                }
            }
        }
        m
    }

    /// Matrix of `arrow(i, j)`, restricted to intersecting pairs.
    pub fn arrow_matrix(&self, inter: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let n = self.shapes.len();
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && inter[i][j] && arrow(&self.shapes[i], &self.shapes[j]) {
                    m[i][j] = true;
                }
            }
        }
        m
    }

    /// `in_ter[c][a]` ⇔ shape `c` ⊆ Ter(shape `a`).
    fn territory_containment_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.shapes.len();
        let mut m = vec![vec![false; n]; n];
        for c in 0..n {
            for a in 0..n {
                if c == a {
                    continue;
                }
                // Ter(A) ⊆ box(A): box containment prefilter.
                if !self.shapes[a].bbox().contains_rect(self.shapes[c].bbox()) {
                    continue;
                }
                m[c][a] = self.shapes[a].region_in_territory(self.shapes[c].region());
            }
        }
        m
    }
}

/// `Ter(A) ∩ Ter(B) ≠ ∅` re-exported at the family level.
pub fn territories_meet(a: &Shape, b: &Shape) -> bool {
    territories_overlap(a, b)
}

/// The unique positive transform candidate mapping `base` onto `a`, if it
/// exists: its scales come from the bounding boxes (`a = w(A)/w(S)`,
/// `b = h(A)/h(S)`), its offsets from the lower-left corners, and the
/// candidate is accepted only when it maps the base's region onto `a`'s
/// region exactly.
pub fn positive_copy_transform(base: &Shape, a: &Shape) -> Option<Transform> {
    let t = Transform::box_to_box(base.bbox(), a.bbox());
    (base.region().transformed(&t) == *a.region()).then_some(t)
}

/// Which constraint a result refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
}

/// How a report was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    Exact,
    Sampled { samples: u32, seed: u64 },
}

const MAX_VIOLATIONS_PER_CONSTRAINT: usize = 32;

/// Accumulator bounding the recorded violations per constraint.
struct ConstraintCheck {
    constraint: ConstraintId,
    violations: Vec<Vec<String>>,
    truncated: bool,
}

impl ConstraintCheck {
    fn new(constraint: ConstraintId) -> ConstraintCheck {
        ConstraintCheck {
            constraint,
            violations: Vec::new(),
            truncated: false,
        }
    }

    fn record<const N: usize>(&mut self, ids: [String; N]) {
        if self.violations.len() < MAX_VIOLATIONS_PER_CONSTRAINT {
            self.violations.push(ids.to_vec());
        } else {
            self.truncated = true;
        }
    }

    fn finish(self) -> ConstraintResult {
        ConstraintResult {
            constraint: self.constraint,
            pass: self.violations.is_empty(),
            violations: self.violations,
            truncated: self.truncated,
        }
    }
}

/// Outcome for one constraint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintResult {
    pub constraint: ConstraintId,
    pub pass: bool,
    /// Violating shape-id tuples, at most 32 (see `truncated`).
    pub violations: Vec<Vec<String>>,
    pub truncated: bool,
}

/// Full battery outcome.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub mode: CheckMode,
    pub results: Vec<ConstraintResult>,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn result(&self, id: ConstraintId) -> Option<&ConstraintResult> {
        self.results.iter().find(|r| r.constraint == id)
    }

    /// Comma-separated list of failing constraints, e.g. `"C1, C5"`.
    pub fn failure_summary(&self) -> String {
        let failing: Vec<String> = self
            .results
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{:?}", r.constraint))
            .collect();
        if failing.is_empty() {
            "all constraints hold".to_string()
        } else {
            failing.join(", ")
        }
    }
}
