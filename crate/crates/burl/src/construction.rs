//! The recursive construction: probs, roots, stability, the expansion step
//! [`gamma`], and the recursion step [`next_f`] that generates the Burling
//! sequence of families.
//!
//! The objects here are [`Scene`]s: a family of shapes together with the
//! rectangles (*probs*) in which the next level will grow, the certified
//! subterritory of the base shape, and per-shape provenance.
//!
//! # Probs, roots, stability
//!
//! The prob defined by a rect `E` inside a box `B` is
//! `[l(E), r(B)] × [b(E), t(E)]` — the horizontal slab through `E`, flush
//! against the right side of `B` ([`prob_defined_by`]). Every prob of a scene
//! shares the right edge of the family box, so two probs are disjoint exactly
//! when their y-intervals are.
//!
//! A *root* of a prob `P` is a slice `{(x, y) ∈ P : x ≤ x₀}` with
//! `l(P) < x₀ < r(P)` that is disjoint from every family member: a void
//! where a copy of the whole construction can be planted. [`find_root`]
//! returns the canonical root, splitting the gap between `l(P)` and the
//! leftmost family material inside `P`. The canonical root exists iff any
//! root does, and whenever some root lies inside a neighbor's territory the
//! canonical root does too — on any row of `P`, material to the right of a
//! root point must sit at or beyond the leftmost material of `P`, which is
//! already strictly right of the canonical root — so every check below uses
//! the canonical root only.
//!
//! A prob `P` is *stable* for a family when ([`stability_issues`]):
//!
//! 1. its canonical root exists and lies in `Ter(A)` for every neighbor `A`
//!    (a neighbor is a family member meeting `P`),
//! 2. the neighbors are pairwise disjoint,
//! 3. every neighbor strictly encloses `P`'s y-range, and
//! 4. every neighbor crosses `P` vertically: some single component of the
//!    intersection reaches both the bottom and the top side of `P`.
//!
//! # The expansion step and the recursion step
//!
//! [`gamma`] plants, for each prob `P`, a positive copy `S_P` of the base
//! shape: squeezed into the top third `P↑` of `P`, then stretched
//! horizontally around the fixed point `l(P)` so that the copy `E_P` of the
//! base subterritory lands strictly to the right of the family box. Each `P`
//! is replaced by two probs in the grown box: one defined by `E_P` (whose
//! sole neighbor is `S_P`), one defined by the bottom third `P↓` (whose
//! neighbors are among `P`'s). The planted copies arrow exactly the
//! neighbors of their probs and nothing arrows them.
//!
//! [`next_f`] restores the box: it computes the expansion, then maps the
//! whole expanded scene into the canonical root of each original prob by a
//! positive box-to-box transform. The original family is kept, each root
//! receives a full copy of the expansion, and the expansion itself is
//! transient (the copies reuse its id range). The family box is unchanged,
//! sizes follow `a' = a + p·(a + p)` and `p' = 2p²`, and the new probs are
//! again right-flush and pairwise disjoint.
//!
//! # Levels and ids
//!
//! [`Scene::initial`] is level 1: the strongified input shape as `s0`, one
//! prob `p0` defined by a subterritory of it. [`next_f`] raises the level by
//! one and [`burling_sequence`] iterates it. Shape ids `s{i}` and prob ids
//! `p{i}` are assigned in creation order and never reused across levels, so
//! provenance records stay unambiguous: each shape knows the level it was
//! created at, the prob it was planted in, and the transform mapping the
//! base shape onto it.
//!
//! # Checking policy
//!
//! Every step validates its preconditions and the structural properties of
//! what it builds: probs right-flush, pairwise disjoint and stable before
//! expanding; planting transforms positive; planted subterritories right of
//! the old box; the new probs' neighborhoods; the arrow pattern of each
//! planted copy; box preservation and the counting recurrence. Violations
//! surface as [`ConstructionError::InvariantViolated`] — they indicate a
//! bug, not bad input. Full constraint checking of the produced families is
//! a separate concern (`Family::check_constraints`), exercised by tests but
//! not wired into the construction: at level 5 the family already holds
//! 39733 shapes, and the constraints cost far more than the build.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Rat, Rect, Region, Transform};
use crate::relations::{arrow, Family, FamilyBase, FamilyError};
use crate::shape::{
    certify_subterritory, find_subterritory, is_subterritory, Shape, ShapeError, SubterritoryCert,
};

/// Levels beyond this are refused by [`burling_sequence`]: sizes grow doubly
/// exponentially, and level 5 already holds 39733 shapes and 32768 probs.
pub const MAX_LEVEL: u32 = 5;

/// Families at most this large get a full stability re-validation of their
/// probs at the end of [`burling_sequence`].
const FINAL_VALIDATION_LIMIT: usize = 200;

/// Errors from the construction.
#[derive(Debug, Error)]
pub enum ConstructionError {
    /// A prob failed the stability conditions required before expanding.
    #[error("prob `{id}` is not stable: {issues}")]
    UnstableProb { id: String, issues: String },
    /// Two probs of one scene intersect.
    #[error("probs `{a}` and `{b}` intersect")]
    ProbsIntersect { a: String, b: String },
    /// Family material reaches the prob's left edge, so no root exists.
    #[error("prob `{id}` has no root")]
    NoRoot { id: String },
    /// Levels are numbered from 1.
    #[error("level must be at least 1, got {0}")]
    BadLevel(u32),
    /// Refusal to build a family that will not fit in memory or time.
    #[error(
        "level {requested} exceeds the cap of {cap}; family sizes grow \
         doubly exponentially (level 5 already holds 39733 shapes)"
    )]
    LevelTooLarge { requested: u32, cap: u32 },
    /// A structural guarantee of the construction failed; indicates a bug,
    /// not bad input.
    #[error("construction invariant violated: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if cond {
        Ok(())
    } else {
        Err(ConstructionError::InvariantViolated(msg()))
    }
}

/// A prob: the rectangle in which one branch of the next level grows, always
/// flush against the right side of the family box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prob {
    pub id: String,
    pub rect: Rect,
}

/// Where a family member came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// The level at which the shape was created.
    pub level: u32,
    /// The prob the shape was planted in; `None` for the level-1 base
    /// member. Probs are consumed by [`next_f`], so this may name a prob of
    /// an earlier level that is no longer in the scene.
    pub prob: Option<String>,
    /// The positive transform mapping the base shape onto this member.
    pub transform: Transform,
}

/// One way a prob fails to be stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StabilityIssue {
    /// Family material reaches the prob's left edge, so no root exists.
    NoRoot,
    /// The canonical root is not contained in this neighbor's territory.
    RootOutsideTerritory { neighbor: String },
    /// Two neighbors of the prob intersect.
    NeighborsIntersect { a: String, b: String },
    /// The neighbor does not strictly enclose the prob's y-range.
    NotVerticallyEnclosing { neighbor: String },
    /// The neighbor meets the prob, but no single component of the
    /// intersection reaches both the bottom and the top side.
    NoVerticalCrossing { neighbor: String },
}

impl fmt::Display for StabilityIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityIssue::NoRoot => {
                write!(f, "no root (family material reaches the left edge)")
            }
            StabilityIssue::RootOutsideTerritory { neighbor } => {
                write!(f, "canonical root is not contained in Ter({neighbor})")
            }
            StabilityIssue::NeighborsIntersect { a, b } => {
                write!(f, "neighbors `{a}` and `{b}` intersect")
            }
            StabilityIssue::NotVerticallyEnclosing { neighbor } => {
                write!(
                    f,
                    "neighbor `{neighbor}` does not strictly enclose the prob's y-range"
                )
            }
            StabilityIssue::NoVerticalCrossing { neighbor } => {
                write!(f, "neighbor `{neighbor}` does not cross the prob vertically")
            }
        }
    }
}

/// The prob defined by `e` inside the box `b`:
/// `[l(e), r(b)] × [b(e), t(e)]`.
pub fn prob_defined_by(e: &Rect, b: &Rect) -> Result<Rect, ConstructionError> {
    if !b.contains_rect(e) {
        return Err(ShapeError::NotNested {
            inner: e.clone(),
            outer: b.clone(),
        }
        .into());
    }
    Ok(Rect::new(
        e.left().clone(),
        b.right().clone(),
        e.bottom().clone(),
        e.top().clone(),
    ))
}

/// Ids of the family members meeting `p`, in family order.
pub fn neighbors(p: &Rect, family: &Family) -> Vec<String> {
    neighbor_shapes(p, family)
        .into_iter()
        .map(|s| s.id().to_string())
        .collect()
}

fn neighbor_shapes<'a>(p: &Rect, family: &'a Family) -> Vec<&'a Shape> {
    family
        .shapes()
        .iter()
        .filter(|s| s.bbox().intersects(p) && s.region().intersects_rect(p))
        .collect()
}

/// The canonical root of `p` for `family`: the left slice of `p` up to the
/// midpoint between `l(p)` and the leftmost family material inside `p` (up
/// to the x-midpoint of `p` when no material intersects it). `None` when
/// material reaches the left edge of `p`, which rules out every root.
pub fn find_root(p: &Rect, family: &Family) -> Option<Rect> {
    let mut m: Option<Rat> = None;
    for s in family.shapes() {
        if !s.bbox().intersects(p) {
            continue;
        }
        for r in s.region().rects() {
            if let Some(i) = r.intersect(p) {
                let x = i.left().clone();
                m = Some(match m {
                    Some(cur) => Rat::min(cur, x),
                    None => x,
                });
            }
        }
    }
    let m = m.unwrap_or_else(|| p.right().clone());
    if &m == p.left() {
        return None;
    }
    let x0 = Rat::mid(p.left(), &m);
    Some(Rect::new(
        p.left().clone(),
        x0,
        p.bottom().clone(),
        p.top().clone(),
    ))
}

/// Every failure of the four stability conditions of `p` against `family`;
/// empty exactly when `p` is stable.
pub fn stability_issues(p: &Rect, family: &Family) -> Vec<StabilityIssue> {
    let mut out = Vec::new();
    let nbrs = neighbor_shapes(p, family);
    match find_root(p, family) {
        None => out.push(StabilityIssue::NoRoot),
        Some(root) => {
            for s in &nbrs {
                if !s.rect_in_territory(&root) {
                    out.push(StabilityIssue::RootOutsideTerritory {
                        neighbor: s.id().to_string(),
                    });
                }
            }
        }
    }
    for (i, a) in nbrs.iter().enumerate() {
        for b in &nbrs[i + 1..] {
            if a.region().intersects(b.region()) {
                out.push(StabilityIssue::NeighborsIntersect {
                    a: a.id().to_string(),
                    b: b.id().to_string(),
                });
            }
        }
    }
    for s in &nbrs {
        if !(s.bbox().bottom() < p.bottom() && p.top() < s.bbox().top()) {
            out.push(StabilityIssue::NotVerticallyEnclosing {
                neighbor: s.id().to_string(),
            });
        }
    }
    for s in &nbrs {
        if !s.crosses_vertically(p) {
            out.push(StabilityIssue::NoVerticalCrossing {
                neighbor: s.id().to_string(),
            });
        }
    }
    out
}

/// True iff `p` satisfies all four stability conditions for `family`.
pub fn is_stable_prob(p: &Rect, family: &Family) -> bool {
    stability_issues(p, family).is_empty()
}

/// One level of the construction: family, probs, the base subterritory, and
/// per-shape provenance.
#[derive(Clone, Debug)]
pub struct Scene {
    family: Family,
    probs: Vec<Prob>,
    sub: SubterritoryCert,
    level: u32,
    provenance: BTreeMap<String, Provenance>,
    next_shape: usize,
    next_prob: usize,
}

impl Scene {
    /// The level-1 scene for `shape`: its strong version as the single
    /// member `s0`, with prob `p0` defined by a scanned subterritory.
    pub fn initial(shape: Shape) -> Result<Scene, ConstructionError> {
        let base = FamilyBase::new(shape)?;
        let sub = find_subterritory(base.effective())?;
        Scene::from_base(base, sub)
    }

    /// The level-1 scene with a caller-chosen subterritory `e`, which must
    /// be a subterritory of the *strongified* shape.
    pub fn initial_with_subterritory(
        shape: Shape,
        e: &Rect,
    ) -> Result<Scene, ConstructionError> {
        let base = FamilyBase::new(shape)?;
        let sub = certify_subterritory(e, base.effective())?;
        Scene::from_base(base, sub)
    }

    fn from_base(base: FamilyBase, sub: SubterritoryCert) -> Result<Scene, ConstructionError> {
        let s0 = base.effective().with_id("s0");
        let p0 = prob_defined_by(&sub.rect, s0.bbox())?;
        let family = Family::new(vec![s0], Some(base))?;
        let mut provenance = BTreeMap::new();
        provenance.insert(
            "s0".to_string(),
            Provenance {
                level: 1,
                prob: None,
                transform: Transform::identity(),
            },
        );
        let scene = Scene {
            family,
            probs: vec![Prob {
                id: "p0".to_string(),
                rect: p0,
            }],
            sub,
            level: 1,
            provenance,
            next_shape: 1,
            next_prob: 1,
        };
        scene.check_probs()?;
        Ok(scene)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn probs(&self) -> &[Prob] {
        &self.probs
    }

    /// The certified subterritory of the base shape seeding the recursion.
    pub fn sub(&self) -> &SubterritoryCert {
        &self.sub
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn provenance(&self) -> &BTreeMap<String, Provenance> {
        &self.provenance
    }

    pub fn provenance_of(&self, id: &str) -> Option<&Provenance> {
        self.provenance.get(id)
    }

    /// The base every family member is a positive copy of.
    pub fn base(&self) -> &FamilyBase {
        self.family
            .base()
            .expect("construction scenes always carry a base")
    }

    /// Checks prob placement: every prob inside the family box and flush
    /// against its right edge, ids unique, probs pairwise disjoint.
    pub fn check_prob_placement(&self) -> Result<(), ConstructionError> {
        let bbox = self.family.bbox();
        let mut seen = BTreeSet::new();
        for p in &self.probs {
            ensure(seen.insert(p.id.as_str()), || {
                format!("duplicate prob id `{}`", p.id)
            })?;
            ensure(
                bbox.contains_rect(&p.rect) && p.rect.right() == bbox.right(),
                || {
                    format!(
                        "prob `{}` {:?} is not right-flush inside the family box {bbox:?}",
                        p.id, p.rect
                    )
                },
            )?;
        }
        ensure_probs_disjoint(&self.probs)
    }

    /// [`Scene::check_prob_placement`] plus stability of every prob.
    pub fn check_probs(&self) -> Result<(), ConstructionError> {
        self.check_prob_placement()?;
        for p in &self.probs {
            let issues = stability_issues(&p.rect, &self.family);
            if !issues.is_empty() {
                return Err(ConstructionError::UnstableProb {
                    id: p.id.clone(),
                    issues: issues
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("; "),
                });
            }
        }
        Ok(())
    }

    /// Reassembles a scene from stored parts, e.g. a parsed document.
    ///
    /// Validates what every scene must satisfy regardless of origin: the
    /// family records a base, the level is at least 1, every member has a
    /// provenance record, and the probs are well-placed
    /// ([`Scene::check_prob_placement`]). Stability is *not* required here —
    /// checking it is the point of some callers — but every expanding
    /// operation re-checks it first. Id counters resume after the largest
    /// numeric `s{i}`/`p{i}` suffix found anywhere in the parts.
    pub fn from_parts(
        family: Family,
        probs: Vec<Prob>,
        sub: SubterritoryCert,
        level: u32,
        provenance: BTreeMap<String, Provenance>,
    ) -> Result<Scene, ConstructionError> {
        if family.base().is_none() {
            return Err(FamilyError::NoBase.into());
        }
        if level == 0 {
            return Err(ConstructionError::BadLevel(0));
        }
        for s in family.shapes() {
            ensure(provenance.contains_key(s.id()), || {
                format!("shape `{}` has no provenance record", s.id())
            })?;
        }
        let suffix = |id: &str, prefix: char| -> usize {
            id.strip_prefix(prefix)
                .and_then(|rest| rest.parse::<usize>().ok())
                .map_or(0, |n| n + 1)
        };
        let next_shape = family
            .shapes()
            .iter()
            .map(|s| suffix(s.id(), 's'))
            .max()
            .unwrap_or(0);
        let next_prob = probs
            .iter()
            .map(|p| suffix(&p.id, 'p'))
            .chain(
                provenance
                    .values()
                    .filter_map(|prov| prov.prob.as_deref())
                    .map(|id| suffix(id, 'p')),
            )
            .max()
            .unwrap_or(0);
        let scene = Scene {
            family,
            probs,
            sub,
            level,
            provenance,
            next_shape,
            next_prob,
        };
        scene.check_prob_placement()?;
        Ok(scene)
    }
}

/// All probs share the family box's right edge, so two intersect exactly
/// when their (closed) y-intervals overlap; after sorting by bottom it is
/// enough to compare adjacent pairs.
fn ensure_probs_disjoint(probs: &[Prob]) -> Result<(), ConstructionError> {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&i, &j| probs[i].rect.bottom().cmp(probs[j].rect.bottom()));
    for w in order.windows(2) {
        let (lo, hi) = (&probs[w[0]], &probs[w[1]]);
        if hi.rect.bottom() <= lo.rect.top() {
            return Err(ConstructionError::ProbsIntersect {
                a: lo.id.clone(),
                b: hi.id.clone(),
            });
        }
    }
    Ok(())
}

/// The expansion step: plants one stretched positive copy of the base shape
/// per prob and replaces each prob by two new ones in the grown box. Keeps
/// the level number — this is the first half of [`next_f`], exposed so the
/// intermediate scene can be inspected.
pub fn gamma(scene: &Scene) -> Result<Scene, ConstructionError> {
    scene.check_probs()?;
    let base = scene.base().clone();
    let s_base = base.effective().clone();
    let sbox = s_base.bbox().clone();
    let e = scene.sub.rect.clone();
    let fbox = scene.family.bbox();

    // Horizontal stretch shared by every planted copy: scale x by
    // 2·w(S)/(l(E) − l(S)) around the fixed point l(P). Composed with the
    // box-to-box squeeze into P↑ this puts the copy of l(E) exactly at
    // l(P) + 2·w(P) = r(box) + w(P), strictly right of the family box.
    let a2 = Rat::int(2) * sbox.width() / (e.left() - sbox.left());
    let third = Rat::new(1, 3);

    struct Planted {
        prob: Prob,
        shape: Shape,
        e_p: Rect,
        p_down: Rect,
        t_p: Transform,
    }

    let mut planted: Vec<Planted> = Vec::with_capacity(scene.probs.len());
    let mut next_shape = scene.next_shape;
    for p in &scene.probs {
        let pr = &p.rect;
        let p_up = Rect::new(
            pr.left().clone(),
            pr.right().clone(),
            (pr.bottom() + Rat::int(2) * pr.top()) * &third,
            pr.top().clone(),
        );
        let p_down = Rect::new(
            pr.left().clone(),
            pr.right().clone(),
            pr.bottom().clone(),
            (Rat::int(2) * pr.bottom() + pr.top()) * &third,
        );
        let t1 = Transform::box_to_box(&sbox, &p_up);
        let t2 = Transform::new(
            a2.clone(),
            Rat::one(),
            p_up.left() * (Rat::one() - &a2),
            Rat::zero(),
        );
        let t_p = t2.compose(&t1);
        ensure(t_p.is_positive(), || {
            format!("planting transform for `{}` must be positive, got {t_p:?}", p.id)
        })?;
        let shape = s_base.transformed(&t_p).with_id(format!("s{next_shape}"));
        next_shape += 1;
        let e_p = t_p.apply_rect(&e);
        ensure(e_p.left() > fbox.right(), || {
            format!(
                "planted subterritory {e_p:?} for `{}` must start strictly right \
                 of the family box {fbox:?}",
                p.id
            )
        })?;
        ensure(is_subterritory(&e_p, &shape), || {
            format!(
                "image {e_p:?} of the base subterritory must be a subterritory of \
                 the planted copy `{}`",
                shape.id()
            )
        })?;
        planted.push(Planted {
            prob: p.clone(),
            shape,
            e_p,
            p_down,
            t_p,
        });
    }

    let mut shapes: Vec<Shape> = scene.family.shapes().to_vec();
    shapes.extend(planted.iter().map(|pl| pl.shape.clone()));
    let family = Family::new(shapes, Some(base))?;
    let gbox = family.bbox();

    let mut probs = Vec::with_capacity(2 * planted.len());
    let mut next_prob = scene.next_prob;
    for pl in &planted {
        for rect in [&pl.e_p, &pl.p_down] {
            probs.push(Prob {
                id: format!("p{next_prob}"),
                rect: prob_defined_by(rect, &gbox)?,
            });
            next_prob += 1;
        }
    }
    ensure_probs_disjoint(&probs)?;

    // Structural properties of the expansion, checked outright: each planted
    // copy lives alone in the y-band of its prob and keeps its territory
    // clear of the other probs; its first prob sees exactly it and its
    // second prob sees only what the original prob saw; and it arrows
    // exactly its prob's neighbors while nothing arrows it.
    for (i, pl) in planted.iter().enumerate() {
        let old_n: BTreeSet<String> =
            neighbors(&pl.prob.rect, &scene.family).into_iter().collect();
        for (j, other) in planted.iter().enumerate() {
            if i == j {
                continue;
            }
            ensure(!pl.shape.region().intersects_rect(&other.prob.rect), || {
                format!(
                    "planted copy `{}` must avoid the other probs; it meets `{}`",
                    pl.shape.id(),
                    other.prob.id
                )
            })?;
            ensure(!pl.shape.region().intersects(other.shape.region()), || {
                format!(
                    "planted copies `{}` and `{}` must be disjoint",
                    pl.shape.id(),
                    other.shape.id()
                )
            })?;
            // Ter(S_P) ⊆ box(S_P), so a bbox miss settles the scan.
            if pl.shape.bbox().intersects(&other.prob.rect) {
                ensure(
                    !pl.shape
                        .region_meets_territory(&Region::from_rect(other.prob.rect.clone())),
                    || {
                        format!(
                            "territory of planted copy `{}` must avoid prob `{}`",
                            pl.shape.id(),
                            other.prob.id
                        )
                    },
                )?;
            }
        }
        let p1 = &probs[2 * i];
        let p2 = &probs[2 * i + 1];
        ensure(
            neighbors(&p1.rect, &family) == vec![pl.shape.id().to_string()],
            || {
                format!(
                    "prob `{}` must see exactly the planted copy `{}`",
                    p1.id,
                    pl.shape.id()
                )
            },
        )?;
        ensure(
            neighbors(&p2.rect, &family).iter().all(|id| old_n.contains(id)),
            || {
                format!(
                    "prob `{}` may only see neighbors of the original prob `{}`",
                    p2.id, pl.prob.id
                )
            },
        )?;
        for a in family.shapes() {
            if a.id() == pl.shape.id() {
                continue;
            }
            ensure(arrow(&pl.shape, a) == old_n.contains(a.id()), || {
                format!(
                    "planted copy `{}` must arrow exactly the neighbors of prob \
                     `{}`; disagreement at `{}`",
                    pl.shape.id(),
                    pl.prob.id,
                    a.id()
                )
            })?;
            ensure(!arrow(a, &pl.shape), || {
                format!(
                    "nothing may arrow the planted copy `{}`; `{}` does",
                    pl.shape.id(),
                    a.id()
                )
            })?;
        }
    }

    ensure(family.len() == scene.family.len() + scene.probs.len(), || {
        "expansion must add exactly one shape per prob".to_string()
    })?;
    ensure(probs.len() == 2 * scene.probs.len(), || {
        "expansion must produce exactly two probs per prob".to_string()
    })?;

    let mut provenance = scene.provenance.clone();
    for pl in &planted {
        provenance.insert(
            pl.shape.id().to_string(),
            Provenance {
                level: scene.level,
                prob: Some(pl.prob.id.clone()),
                transform: pl.t_p.clone(),
            },
        );
    }

    Ok(Scene {
        family,
        probs,
        sub: scene.sub.clone(),
        level: scene.level,
        provenance,
        next_shape,
        next_prob,
    })
}

/// The recursion step: expands the scene with [`gamma`], then maps the whole
/// expansion into the canonical root of each original prob. The original
/// family is kept, the family box is preserved, and sizes follow
/// `a' = a + p·(a + p)`, `p' = 2p²`.
pub fn next_f(scene: &Scene) -> Result<Scene, ConstructionError> {
    let g = gamma(scene)?;
    let fbox = scene.family.bbox();
    let gbox = g.family.bbox();
    let base_region = scene.base().effective().region().clone();

    let mut shapes: Vec<Shape> = scene.family.shapes().to_vec();
    let mut probs: Vec<Prob> = Vec::new();
    let mut provenance = scene.provenance.clone();
    // The expansion's shape and prob ids are transient: only the copies
    // planted below reach the output scene, and they reuse the same ranges.
    let mut next_shape = scene.next_shape;
    let mut next_prob = scene.next_prob;

    for p in &scene.probs {
        let root = find_root(&p.rect, &scene.family).ok_or_else(|| ConstructionError::NoRoot {
            id: p.id.clone(),
        })?;
        let t = Transform::box_to_box(&gbox, &root);
        for a in g.family.shapes() {
            let copy = a.transformed(&t).with_id(format!("s{next_shape}"));
            next_shape += 1;
            let src = g
                .provenance
                .get(a.id())
                .expect("expansion records provenance for every member");
            let composed = t.compose(&src.transform);
            ensure(copy.region() == &base_region.transformed(&composed), || {
                format!(
                    "copy `{}` must be the base shape under its recorded transform",
                    copy.id()
                )
            })?;
            provenance.insert(
                copy.id().to_string(),
                Provenance {
                    level: scene.level + 1,
                    prob: Some(p.id.clone()),
                    transform: composed,
                },
            );
            shapes.push(copy);
        }
        for q in &g.probs {
            probs.push(Prob {
                id: format!("p{next_prob}"),
                rect: prob_defined_by(&t.apply_rect(&q.rect), &fbox)?,
            });
            next_prob += 1;
        }
    }

    let family = Family::new(shapes, Some(scene.base().clone()))?;
    let (a_n, p_n) = (scene.family.len(), scene.probs.len());
    ensure(family.bbox() == fbox, || {
        "the recursion step must preserve the family box".to_string()
    })?;
    ensure(family.len() == a_n + p_n * (a_n + p_n), || {
        format!(
            "family size must follow a + p·(a + p) with a = {a_n}, p = {p_n}; got {}",
            family.len()
        )
    })?;
    ensure(probs.len() == 2 * p_n * p_n, || {
        format!("prob count must follow 2p² with p = {p_n}; got {}", probs.len())
    })?;
    ensure_probs_disjoint(&probs)?;

    Ok(Scene {
        family,
        probs,
        sub: scene.sub.clone(),
        level: scene.level + 1,
        provenance,
        next_shape,
        next_prob,
    })
}

/// Runs the construction from `shape` up to level `k`: the level-1 scene is
/// the strongified shape with one prob, and each further level applies
/// [`next_f`]. Levels beyond [`MAX_LEVEL`] are refused; use
/// [`burling_sequence_with_cap`] to override deliberately.
pub fn burling_sequence(shape: Shape, k: u32) -> Result<Scene, ConstructionError> {
    burling_sequence_with_cap(shape, k, MAX_LEVEL)
}

/// [`burling_sequence`] with an explicit level cap.
pub fn burling_sequence_with_cap(
    shape: Shape,
    k: u32,
    cap: u32,
) -> Result<Scene, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::BadLevel(k));
    }
    if k > cap {
        return Err(ConstructionError::LevelTooLarge { requested: k, cap });
    }
    let mut scene = Scene::initial(shape)?;
    while scene.level < k {
        scene = next_f(&scene)?;
    }
    // The loop checked each level's probs just before expanding them; the
    // final level's probs get the same treatment while the family is small
    // enough for it.
    if scene.family.len() <= FINAL_VALIDATION_LIMIT {
        scene.check_probs()?;
    }
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn frame() -> Shape {
        Shape::new(
            "f",
            Region::new(vec![
                Rect::ints(0, 0, 0, 3),
                Rect::ints(3, 3, 0, 3),
                Rect::ints(0, 3, 0, 0),
                Rect::ints(0, 3, 3, 3),
            ]),
        )
        .expect("frame is a Pouna set")
    }

    /// The frame scene with the unit square `[1,2]²` as its subterritory,
    /// whose expansion and recursion values are known exactly.
    fn frame_scene() -> Scene {
        Scene::initial_with_subterritory(frame(), &Rect::ints(1, 2, 1, 2))
            .expect("the unit square inside the frame is a subterritory")
    }

    #[test]
    fn initial_scene_picks_a_stable_prob() {
        let scene = Scene::initial(frame()).expect("frame starts a scene");
        assert_eq!(scene.level(), 1);
        assert_eq!(scene.family().len(), 1);
        let p0 = &scene.probs()[0];
        assert_eq!(p0.id, "p0");
        let bbox = scene.family().bbox();
        assert_eq!(p0.rect.right(), bbox.right(), "probs are right-flush");
        assert_eq!(neighbors(&p0.rect, scene.family()), vec!["s0".to_string()]);
        assert!(is_stable_prob(&p0.rect, scene.family()));
        let root = find_root(&p0.rect, scene.family()).expect("initial prob has a root");
        assert!(
            scene.family().shapes()[0].rect_in_territory(&root),
            "the root sits in the base shape's territory"
        );
    }

    #[test]
    fn prob_defined_by_extends_to_the_right_edge() {
        let b = Rect::ints(0, 10, 0, 10);
        let p = prob_defined_by(&Rect::ints(2, 4, 3, 5), &b).expect("nested");
        assert_eq!(p, Rect::ints(2, 10, 3, 5));
        assert!(prob_defined_by(&Rect::ints(2, 11, 3, 5), &b).is_err());
    }

    #[test]
    fn gamma_expands_the_frame_scene_to_the_known_values() {
        let g = gamma(&frame_scene()).expect("expansion succeeds");
        assert_eq!(g.level(), 1, "the expansion step keeps the level");
        assert_eq!(g.family().len(), 2);
        assert_eq!(g.family().bbox(), Rect::ints(0, 13, 0, 3));

        let planted = g.family().shape_by_id("s1").expect("planted copy s1");
        let prov = g.provenance_of("s1").expect("provenance of s1");
        assert_eq!(prov.level, 1);
        assert_eq!(prov.prob.as_deref(), Some("p0"));
        let expected = Transform::new(rat(4, 1), rat(1, 9), rat(1, 1), rat(5, 3));
        assert_eq!(prov.transform, expected);
        assert_eq!(planted.region(), &frame().region().transformed(&expected));

        let ids: Vec<&str> = g.probs().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2"]);
        let rects: Vec<Rect> = g.probs().iter().map(|p| p.rect.clone()).collect();
        assert_eq!(
            rects,
            vec![
                Rect::new(rat(5, 1), rat(13, 1), rat(16, 9), rat(17, 9)),
                Rect::new(rat(1, 1), rat(13, 1), rat(1, 1), rat(4, 3)),
            ]
        );
    }

    #[test]
    fn next_f_builds_the_known_second_level() {
        let next = next_f(&frame_scene()).expect("recursion step succeeds");
        assert_eq!(next.level(), 2);
        assert_eq!(next.family().len(), 3);
        assert_eq!(next.family().bbox(), Rect::ints(0, 3, 0, 3));
        let ids: Vec<&str> = next.family().shapes().iter().map(|s| s.id()).collect();
        assert_eq!(ids, ["s0", "s1", "s2"]);

        // The copies land in the root [1,2]×[1,2] of p0 under
        // x ↦ x/13 + 1, y ↦ y/3 + 1.
        let prov1 = next.provenance_of("s1").expect("provenance of s1");
        assert_eq!(prov1.level, 2);
        assert_eq!(prov1.prob.as_deref(), Some("p0"));
        assert_eq!(
            prov1.transform,
            Transform::new(rat(1, 13), rat(1, 3), rat(1, 1), rat(1, 1))
        );
        let prov2 = next.provenance_of("s2").expect("provenance of s2");
        assert_eq!(
            prov2.transform,
            Transform::new(rat(4, 13), rat(1, 27), rat(14, 13), rat(14, 9))
        );

        let ids: Vec<&str> = next.probs().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2"]);
        let rects: Vec<Rect> = next.probs().iter().map(|p| p.rect.clone()).collect();
        assert_eq!(
            rects,
            vec![
                Rect::new(rat(18, 13), rat(3, 1), rat(43, 27), rat(44, 27)),
                Rect::new(rat(14, 13), rat(3, 1), rat(4, 3), rat(13, 9)),
            ]
        );
        for p in next.probs() {
            assert!(
                is_stable_prob(&p.rect, next.family()),
                "prob {} of the new level is stable",
                p.id
            );
        }
    }

    #[test]
    fn sizes_follow_the_counting_recurrence() {
        let mut scene = frame_scene();
        let mut sizes = vec![(scene.family().len(), scene.probs().len())];
        for _ in 0..3 {
            scene = next_f(&scene).expect("recursion step succeeds");
            sizes.push((scene.family().len(), scene.probs().len()));
        }
        assert_eq!(sizes, [(1, 1), (3, 2), (13, 8), (181, 128)]);
        assert!(
            scene.provenance().values().all(|p| p.transform.is_positive()),
            "every member is a positive copy of the base"
        );
    }

    /// A neighbor that meets the prob in two components — one touching the
    /// bottom side, one the top side — without any single component
    /// crossing: stability items 1–3 hold and item 4 alone fails.
    fn non_crossing_fixture() -> (Shape, Rect) {
        let a = Shape::new(
            "a",
            Region::new(vec![
                Rect::ints(20, 25, 0, 50),  // left bar
                Rect::ints(20, 54, 0, 5),   // bottom arm
                Rect::ints(50, 54, 0, 30),  // lower column
                Rect::ints(20, 60, 50, 55), // top arm
                Rect::ints(56, 60, 30, 55), // upper column
            ]),
        )
        .expect("fixture is a Pouna set");
        (a, Rect::ints(30, 60, 10, 45))
    }

    #[test]
    fn stability_fails_exactly_on_the_vertical_crossing() {
        let (a, p) = non_crossing_fixture();
        let family = Family::new(vec![a], None).expect("fixture is strong");
        assert_eq!(neighbors(&p, &family), vec!["a".to_string()]);
        let root = find_root(&p, &family).expect("root exists");
        assert_eq!(root, Rect::ints(30, 40, 10, 45));
        assert!(
            family.shapes()[0].rect_in_territory(&root),
            "items 1-3 hold for the fixture"
        );
        assert_eq!(
            stability_issues(&p, &family),
            vec![StabilityIssue::NoVerticalCrossing {
                neighbor: "a".to_string()
            }]
        );
        assert!(!is_stable_prob(&p, &family));
    }

    #[test]
    fn material_on_the_left_edge_blocks_the_root() {
        let family = Family::new(vec![frame()], None).expect("frame family");
        let p = Rect::ints(0, 3, 1, 2);
        assert!(find_root(&p, &family).is_none());
        assert!(stability_issues(&p, &family).contains(&StabilityIssue::NoRoot));
    }

    #[test]
    fn gamma_refuses_an_unstable_prob() {
        let (a, p) = non_crossing_fixture();
        let base = FamilyBase::new(a.clone()).expect("fixture is strong");
        let sub = find_subterritory(base.effective()).expect("fixture has a subterritory");
        let family = Family::new(vec![a], Some(base)).expect("fixture family");
        // The fixture prob happens to be right-flush in the fixture's box,
        // so only stability can reject it.
        assert_eq!(p.right(), family.bbox().right());
        let scene = Scene {
            family,
            probs: vec![Prob {
                id: "p0".to_string(),
                rect: p,
            }],
            sub,
            level: 1,
            provenance: BTreeMap::new(),
            next_shape: 1,
            next_prob: 1,
        };
        match gamma(&scene) {
            Err(ConstructionError::UnstableProb { id, issues }) => {
                assert_eq!(id, "p0");
                assert!(
                    issues.contains("does not cross the prob vertically"),
                    "issues: {issues}"
                );
            }
            other => panic!("expected an unstable-prob error, got {other:?}"),
        }
    }

    #[test]
    fn sequence_levels_are_validated() {
        assert!(matches!(
            burling_sequence(frame(), 0),
            Err(ConstructionError::BadLevel(0))
        ));
        assert!(matches!(
            burling_sequence(frame(), MAX_LEVEL + 1),
            Err(ConstructionError::LevelTooLarge {
                requested: 6,
                cap: MAX_LEVEL
            })
        ));
        assert!(burling_sequence_with_cap(frame(), 2, 2).is_ok());
    }

    #[test]
    fn a_rect_not_strictly_inside_is_rejected_as_subterritory() {
        // Touches the box's top edge, so it is not strictly inside.
        let err = Scene::initial_with_subterritory(frame(), &Rect::ints(1, 2, 1, 3));
        assert!(matches!(
            err,
            Err(ConstructionError::Shape(ShapeError::NotSubterritory { .. }))
        ));
    }

    #[test]
    fn burling_sequence_reaches_level_three() {
        let scene = burling_sequence(frame(), 3).expect("level 3 builds");
        assert_eq!(scene.level(), 3);
        assert_eq!(scene.family().len(), 13);
        assert_eq!(scene.probs().len(), 8);
        for s in scene.family().shapes() {
            let prov = scene.provenance_of(s.id()).expect("every shape has provenance");
            assert!((1..=3).contains(&prov.level));
            assert_eq!(
                s.region(),
                &scene
                    .base()
                    .effective()
                    .region()
                    .transformed(&prov.transform),
                "member {} is the base under its recorded transform",
                s.id()
            );
        }
    }

    #[test]
    fn the_third_family_is_constrained() {
        let scene = burling_sequence(frame(), 3).expect("level 3 builds");
        let report = scene
            .family()
            .check_constraints()
            .expect("scene families record their base");
        assert!(report.passed(), "{}", report.failure_summary());
    }
}
