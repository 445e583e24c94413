//! Pouna shapes: validated rectilinear sets, their territories, crossings,
//! and subterritories.
//!
//! A *Pouna set* is a compact, path-connected plane set that is not a single
//! (possibly degenerate) axis-parallel rectangle. Here Pouna sets are carried
//! by [`Region`]s — finite unions of closed rects — so compactness is
//! automatic and the other two conditions are decidable exactly.
//!
//! The *territory* of a shape `S` is
//!
//! ```text
//! Ter(S) = { (x, y) ∈ box(S) \ S : ∃ x' > x with (x', y) ∈ S }
//! ```
//!
//! Territories are generally not closed (for a frame, `Ter` is the open
//! interior), so they are never materialized as regions. Every predicate
//! involving `Ter` reduces to finitely many exact point queries through
//! [`Shape::ter_member`], evaluated at one representative point per face of a
//! coordinate arrangement: territory membership is constant on the faces of
//! any grid refining the shape's own coordinates, because the row maximum
//! `M(y) = max { x : (x, y) ∈ S }` is itself constant on y-faces and takes
//! grid values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{FaceMask, Grid, Point, Rat, Rect, Region, Transform};

/// Errors from shape validation and territory machinery.
#[derive(Debug, Error)]
pub enum ShapeError {
    /// The region is not a Pouna set.
    #[error("not a Pouna set: {reason}")]
    NotPouna { reason: String },
    /// The shape (and, where relevant, its reflection) has empty territory.
    #[error("shape `{id}` is not strong: its territory is empty")]
    NotStrong { id: String },
    /// A rect expected inside another sticks out.
    #[error("rect {inner:?} is not contained in {outer:?}")]
    NotNested { inner: Rect, outer: Rect },
    /// A rect offered as a subterritory fails one of the three conditions.
    #[error("rect {rect:?} is not a subterritory of shape `{id}`")]
    NotSubterritory { rect: Rect, id: String },
    /// A geometric guarantee failed; indicates a bug, not bad input.
    #[error("internal geometry error: {0}")]
    Internal(String),
}

/// True iff `region` is a (rectilinear) Pouna set: non-empty, path-connected,
/// and not equal as a point set to one closed rect.
///
/// Canonicalization makes the last clause syntactic: a region equals a single
/// rect exactly when its canonical form has one element.
pub fn is_pouna(region: &Region) -> bool {
    !region.is_empty() && region.rects().len() >= 2 && region.is_connected()
}

/// A validated rectilinear Pouna set with an identifying label.
#[derive(Clone, PartialEq, Eq)]
pub struct Shape {
    id: String,
    region: Region,
    bbox: Rect,
}

impl Shape {
    /// Validates `region` as a Pouna set.
    pub fn new(id: impl Into<String>, region: Region) -> Result<Shape, ShapeError> {
        let reason = if region.is_empty() {
            Some("empty region")
        } else if region.rects().len() < 2 {
            Some("equals a single (possibly degenerate) rectangle")
        } else if !region.is_connected() {
            Some("not path-connected")
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(ShapeError::NotPouna {
                reason: reason.to_string(),
            });
        }
        let bbox = region.bbox().expect("non-empty region has a bbox");
        Ok(Shape {
            id: id.into(),
            region,
            bbox,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// The bounding box `box(S)` (cached).
    pub fn bbox(&self) -> &Rect {
        &self.bbox
    }

    /// Largest x-coordinate of `S` on the horizontal line at `y`, if the line
    /// meets `S` at all.
    pub fn row_max_right(&self, y: &Rat) -> Option<Rat> {
        self.region
            .rects()
            .iter()
            .filter(|r| r.bottom() <= y && y <= r.top())
            .map(|r| r.right().clone())
            .max()
    }

    /// Territory membership: `p ∈ box(S)`, `p ∉ S`, and some point of `S` on
    /// the same row lies strictly to the right of `p`.
    pub fn ter_member(&self, p: &Point) -> bool {
        self.bbox.contains_point(p)
            && !self.region.contains_point(p)
            && self
                .row_max_right(&p.y)
                .is_some_and(|m| m > p.x)
    }

    /// True iff `Ter(S) ≠ ∅`, by sampling every face of the shape's own
    /// arrangement (territory membership is face-constant on it).
    pub fn is_strong(&self) -> bool {
        let grid = self.region.grid();
        for i in 0..grid.nx() {
            let x = grid.sample_x(i);
            for j in 0..grid.ny() {
                if self.ter_member(&Point::new(x.clone(), grid.sample_y(j))) {
                    return true;
                }
            }
        }
        false
    }

    /// Returns a strong shape: `self` when already strong, otherwise the
    /// horizontal reflection `(x, y) ↦ (−x, y)`, together with a flag saying
    /// whether reflection happened. Either the shape or its reflection is
    /// strong for every Pouna set; if both territories come out empty, that
    /// guarantee is broken and an internal error is reported.
    pub fn strongify(self) -> Result<(Shape, bool), ShapeError> {
        if self.is_strong() {
            return Ok((self, false));
        }
        let reflected = self.transformed(&Transform::reflect_horizontal());
        if reflected.is_strong() {
            Ok((reflected, true))
        } else {
            Err(ShapeError::Internal(format!(
                "neither shape `{}` nor its horizontal reflection is strong",
                self.id
            )))
        }
    }

    /// The left edge set `{ (x, y) ∈ S : x = l(S) }` as a (degenerate) region.
    pub fn left_edge_set(&self) -> Region {
        let l = self.bbox.left();
        Region::new(
            self.region
                .rects()
                .iter()
                .filter(|r| r.left() == l)
                .map(|r| Rect::new(l.clone(), l.clone(), r.bottom().clone(), r.top().clone()))
                .collect(),
        )
    }

    /// Image under an axis-parallel affine map, keeping the id.
    pub fn transformed(&self, t: &Transform) -> Shape {
        let region = self.region.transformed(t);
        let bbox = region.bbox().expect("image of non-empty region");
        Shape {
            id: self.id.clone(),
            region,
            bbox,
        }
    }

    /// Same shape under a fresh id.
    pub fn with_id(&self, id: impl Into<String>) -> Shape {
        Shape {
            id: id.into(),
            region: self.region.clone(),
            bbox: self.bbox.clone(),
        }
    }

    /// A point of `box(S)° \ S`, which exists for every Pouna shape.
    ///
    /// Open cells of the shape's own grid partition `box(S)°` up to a measure
    /// zero set of grid lines, and `box(S)° \ S` is open and non-empty, so it
    /// contains a whole cell; scanning cell representatives finds one.
    pub fn interior_gap_witness(&self) -> Option<Point> {
        let grid = self.region.grid();
        for i in (1..grid.nx()).step_by(2) {
            let x = grid.sample_x(i);
            for j in (1..grid.ny()).step_by(2) {
                let p = Point::new(x.clone(), grid.sample_y(j));
                if !self.region.contains_point(&p) {
                    return Some(p);
                }
            }
        }
        None
    }

    /// `q ⊆ Ter(S)`, by sampling the faces of `q` in the combined arrangement
    /// of `q` and the shape.
    pub fn rect_in_territory(&self, q: &Rect) -> bool {
        let grid = self.combined_grid([q.left(), q.right()], [q.bottom(), q.top()]);
        let i0 = 2 * grid.x_pos(q.left()).expect("q.left in combined grid");
        let i1 = 2 * grid.x_pos(q.right()).expect("q.right in combined grid");
        let j0 = 2 * grid.y_pos(q.bottom()).expect("q.bottom in combined grid");
        let j1 = 2 * grid.y_pos(q.top()).expect("q.top in combined grid");
        for i in i0..=i1 {
            let x = grid.sample_x(i);
            for j in j0..=j1 {
                if !self.ter_member(&Point::new(x.clone(), grid.sample_y(j))) {
                    return false;
                }
            }
        }
        true
    }

    /// `reg ⊆ Ter(S)`, over the combined arrangement of both.
    pub fn region_in_territory(&self, reg: &Region) -> bool {
        self.scan_region_vs_territory(reg, false)
    }

    /// `reg ∩ Ter(S) ≠ ∅`, over the combined arrangement of both.
    pub fn region_meets_territory(&self, reg: &Region) -> bool {
        self.scan_region_vs_territory(reg, true)
    }

    /// Shared scan: `any = true` asks for a common face (intersection
    /// non-empty), `any = false` asks that every `reg`-face is a `Ter`-face
    /// (containment).
    fn scan_region_vs_territory(&self, reg: &Region, any: bool) -> bool {
        let mut xs: Vec<&Rat> = Vec::new();
        let mut ys: Vec<&Rat> = Vec::new();
        for r in reg.rects() {
            xs.push(r.left());
            xs.push(r.right());
            ys.push(r.bottom());
            ys.push(r.top());
        }
        let grid = self.combined_grid(xs, ys);
        for i in 0..grid.nx() {
            let x = grid.sample_x(i);
            for j in 0..grid.ny() {
                let p = Point::new(x.clone(), grid.sample_y(j));
                if reg.contains_point(&p) {
                    let ter = self.ter_member(&p);
                    if any && ter {
                        return true;
                    }
                    if !any && !ter {
                        return false;
                    }
                }
            }
        }
        !any
    }

    /// Grid over this shape's coordinates plus the given extras.
    fn combined_grid<'a>(
        &self,
        extra_xs: impl IntoIterator<Item = &'a Rat>,
        extra_ys: impl IntoIterator<Item = &'a Rat>,
    ) -> Grid {
        let mut xs: Vec<Rat> = extra_xs.into_iter().cloned().collect();
        let mut ys: Vec<Rat> = extra_ys.into_iter().cloned().collect();
        for r in self.region.rects() {
            xs.push(r.left().clone());
            xs.push(r.right().clone());
            ys.push(r.bottom().clone());
            ys.push(r.top().clone());
        }
        Grid::new(xs, ys)
    }

    /// True iff some connected component of `S ∩ R` has points on both the
    /// bottom side and the top side of `R`.
    pub fn crosses_vertically(&self, r: &Rect) -> bool {
        self.crossing_path(r, true).is_some()
    }

    /// True iff some connected component of `S ∩ R` has points on both the
    /// left side and the right side of `R`.
    pub fn crosses_horizontally(&self, r: &Rect) -> bool {
        self.crossing_path(r, false).is_some()
    }

    /// A witness for a vertical crossing of `r`: the closures of a face path
    /// inside one component of `S ∩ r`, leading from the bottom side to the
    /// top side. `None` when no component crosses.
    pub fn vertical_crossing_path(&self, r: &Rect) -> Option<Vec<Rect>> {
        self.crossing_path(r, true)
    }

    fn crossing_path(&self, r: &Rect, vertical: bool) -> Option<Vec<Rect>> {
        let clip = self.region.intersect(&Region::from_rect(r.clone()));
        if clip.is_empty() {
            return None;
        }
        let grid = clip.grid();
        let (nx, ny) = (grid.nx(), grid.ny());
        // The intersection only reaches a side of `r` if that side's
        // coordinate survives into the clipped grid.
        let (lo_ok, hi_ok) = if vertical {
            (
                grid.ys().first() == Some(r.bottom()),
                grid.ys().last() == Some(r.top()),
            )
        } else {
            (
                grid.xs().first() == Some(r.left()),
                grid.xs().last() == Some(r.right()),
            )
        };
        if !lo_ok || !hi_ok {
            return None;
        }
        let mask = FaceMask::from_region(&grid, &clip);
        let on_lo = |i: usize, j: usize| if vertical { j == 0 } else { i == 0 };
        let on_hi = |i: usize, j: usize| {
            if vertical {
                j == ny - 1
            } else {
                i == nx - 1
            }
        };
        // BFS from all low-side faces; the first high-side face reached gives
        // a deterministic witness path within one component.
        let mut parent: Vec<Option<usize>> = vec![None; nx * ny];
        let mut seen = vec![false; nx * ny];
        let mut queue = std::collections::VecDeque::new();
        for i in 0..nx {
            for j in 0..ny {
                if mask.get(i, j) && on_lo(i, j) {
                    let idx = i * ny + j;
                    seen[idx] = true;
                    queue.push_back(idx);
                }
            }
        }
        while let Some(idx) = queue.pop_front() {
            let (i, j) = (idx / ny, idx % ny);
            if on_hi(i, j) {
                let mut path = vec![grid.face_closure(i, j)];
                let mut cur = idx;
                while let Some(prev) = parent[cur] {
                    let (pi, pj) = (prev / ny, prev % ny);
                    path.push(grid.face_closure(pi, pj));
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                        continue;
                    }
                    let nidx = ni as usize * ny + nj as usize;
                    if mask.get(ni as usize, nj as usize) && !seen[nidx] {
                        seen[nidx] = true;
                        parent[nidx] = Some(idx);
                        queue.push_back(nidx);
                    }
                }
            }
        }
        None
    }

    /// Exact territory materialization for rendering: one patch per maximal
    /// run of territory faces along each fine row of the shape's grid.
    pub fn territory_patches(&self) -> Vec<TerritoryPatch> {
        let grid = self.region.grid();
        let (nx, ny) = (grid.nx(), grid.ny());
        let mut out = Vec::new();
        for j in 0..ny {
            let y = grid.sample_y(j);
            let mut i = 0;
            while i < nx {
                if !self.ter_member(&Point::new(grid.sample_x(i), y.clone())) {
                    i += 1;
                    continue;
                }
                let a = i;
                while i < nx && self.ter_member(&Point::new(grid.sample_x(i), y.clone())) {
                    i += 1;
                }
                let b = i - 1;
                let run = grid.face_closure(a, j).bounding(&grid.face_closure(b, j));
                out.push(TerritoryPatch {
                    rect: run,
                    open_left: a % 2 == 1,
                    open_right: b % 2 == 1,
                    open_bottom: j % 2 == 1,
                    open_top: j % 2 == 1,
                });
            }
        }
        out
    }
}

impl std::fmt::Debug for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Shape({}: {:?})", self.id, self.region)
    }
}

/// One hatched piece of a territory: the closure of a horizontal run of
/// territory faces, with flags recording which closure edges are **not**
/// part of the territory (territories are not closed sets).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TerritoryPatch {
    pub rect: Rect,
    pub open_left: bool,
    pub open_right: bool,
    pub open_bottom: bool,
    pub open_top: bool,
}

/// `Ter(A) ∩ Ter(B) ≠ ∅`, over the combined arrangement of both shapes.
pub fn territories_overlap(a: &Shape, b: &Shape) -> bool {
    let mut rects: Vec<&Rect> = a.region().rects().iter().collect();
    rects.extend(b.region().rects().iter());
    let grid = Grid::from_rects(rects.into_iter());
    for i in 0..grid.nx() {
        let x = grid.sample_x(i);
        for j in 0..grid.ny() {
            let p = Point::new(x.clone(), grid.sample_y(j));
            if a.ter_member(&p) && b.ter_member(&p) {
                return true;
            }
        }
    }
    false
}

/// The right extension `E_r = [r(E), r(R)] × [b(E), t(E)]` of `E` inside `R`.
pub fn right_extension(e: &Rect, r: &Rect) -> Result<Rect, ShapeError> {
    if !r.contains_rect(e) {
        return Err(ShapeError::NotNested {
            inner: e.clone(),
            outer: r.clone(),
        });
    }
    Ok(Rect::new(
        e.right().clone(),
        r.right().clone(),
        e.bottom().clone(),
        e.top().clone(),
    ))
}

/// A certified subterritory: the rect together with a face path witnessing
/// that the shape crosses its right extension vertically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubterritoryCert {
    pub rect: Rect,
    pub crossing_witness: Vec<Rect>,
}

/// The three subterritory conditions for `E` against shape `s`:
/// strictly inside `box(s)`, contained in `Ter(s)`, and `s` crosses the right
/// extension of `E` vertically.
pub fn is_subterritory(e: &Rect, s: &Shape) -> bool {
    let b = s.bbox();
    let strict = e.left() > b.left()
        && e.right() < b.right()
        && e.bottom() > b.bottom()
        && e.top() < b.top();
    if !strict {
        return false;
    }
    if !s.rect_in_territory(e) {
        return false;
    }
    let ext = right_extension(e, b).expect("strictly inside implies nested");
    s.crosses_vertically(&ext)
}

/// Certifies a caller-chosen subterritory of `s`, for when a particular rect
/// is wanted instead of the scan-order choice of [`find_subterritory`].
pub fn certify_subterritory(e: &Rect, s: &Shape) -> Result<SubterritoryCert, ShapeError> {
    if !is_subterritory(e, s) {
        return Err(ShapeError::NotSubterritory {
            rect: e.clone(),
            id: s.id().to_string(),
        });
    }
    let ext = right_extension(e, s.bbox()).expect("subterritory is strictly inside the box");
    let crossing_witness = s
        .vertical_crossing_path(&ext)
        .expect("subterritory's right extension is crossed");
    Ok(SubterritoryCert {
        rect: e.clone(),
        crossing_witness,
    })
}

/// Finds a certified subterritory of a strong shape.
///
/// Strategy: territory membership is face-constant on the shape's own grid,
/// and a strong rectilinear Pouna set always has a full-dimensional territory
/// *cell* (an open grid cell inside `Ter`). Any non-degenerate closed rect
/// strictly inside such a cell satisfies all three subterritory conditions —
/// the territory points of the cell see a vertical segment of `S` spanning
/// the cell's full height to their right, which crosses the right extension.
/// We take the first territory cell in scan order and inset it by a quarter
/// of its size.
pub fn find_subterritory(s: &Shape) -> Result<SubterritoryCert, ShapeError> {
    if !s.is_strong() {
        return Err(ShapeError::NotStrong {
            id: s.id().to_string(),
        });
    }
    let grid = s.region().grid();
    let quarter = Rat::new(1, 4);
    for j in (1..grid.ny()).step_by(2) {
        let y = grid.sample_y(j);
        for i in (1..grid.nx()).step_by(2) {
            if !s.ter_member(&Point::new(grid.sample_x(i), y.clone())) {
                continue;
            }
            let cell = grid.face_closure(i, j);
            let dx = cell.width() * &quarter;
            let dy = cell.height() * &quarter;
            let e = Rect::new(
                cell.left() + &dx,
                cell.right() - &dx,
                cell.bottom() + &dy,
                cell.top() - &dy,
            );
            return certify_subterritory(&e, s).map_err(|_| {
                ShapeError::Internal(format!(
                    "quarter-inset {e:?} of territory cell {cell:?} of `{}` \
                     failed subterritory validation",
                    s.id()
                ))
            });
        }
    }
    Err(ShapeError::Internal(format!(
        "strong shape `{}` has no full-dimensional territory cell",
        s.id()
    )))
}
