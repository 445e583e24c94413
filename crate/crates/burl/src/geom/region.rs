//! Finite unions of closed rectangles, with exact set-level predicates.
//!
//! A [`Region`] is a finite union of closed, possibly degenerate,
//! axis-parallel rectangles. Regions are kept in a *canonical form*: the set
//! of all maximal rectangles contained in the region, sorted lexicographically
//! by `(xlo, ylo, xhi, yhi)`. The maximal-rectangle set depends only on the
//! region as a point set, so two regions are equal as sets exactly when their
//! canonical rect lists are equal — `==` on `Region` is true set equality.
//!
//! Every other predicate here is decided by the *arrangement face test*: take
//! the sorted lists of x- and y-coordinates appearing in the inputs; they cut
//! the plane into vertices, open edge segments, and open cells, and every
//! input rectangle's indicator is constant on each such face. Evaluating a
//! predicate at one exact representative point per face (vertex, edge
//! midpoint, or cell center) therefore decides it everywhere. The same "fine
//! grid" of faces drives connectivity: faces of a closed region are
//! path-connected exactly when adjacent in the 8-neighborhood of the grid.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::point::Point;
use super::rat::Rat;
use super::rect::Rect;
use super::transform::Transform;

/// Sorted, deduplicated coordinate lists defining an arrangement of faces.
///
/// With `n` x-coordinates there are `2n - 1` *fine indices* along x: even
/// index `2k` is the grid line `xs[k]`, odd index `2k + 1` is the open
/// interval `(xs[k], xs[k+1])`. A *face* is a pair of fine indices.
#[derive(Clone, Debug)]
pub struct Grid {
    xs: Vec<Rat>,
    ys: Vec<Rat>,
}

impl Grid {
    pub fn new(mut xs: Vec<Rat>, mut ys: Vec<Rat>) -> Grid {
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        Grid { xs, ys }
    }

    /// Grid over all coordinates of the given rects.
    pub fn from_rects<'a>(rects: impl IntoIterator<Item = &'a Rect>) -> Grid {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in rects {
            xs.push(r.left().clone());
            xs.push(r.right().clone());
            ys.push(r.bottom().clone());
            ys.push(r.top().clone());
        }
        Grid::new(xs, ys)
    }

    pub fn xs(&self) -> &[Rat] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rat] {
        &self.ys
    }

    /// Number of fine indices along x (0 when the grid is empty).
    pub fn nx(&self) -> usize {
        if self.xs.is_empty() {
            0
        } else {
            2 * self.xs.len() - 1
        }
    }

    pub fn ny(&self) -> usize {
        if self.ys.is_empty() {
            0
        } else {
            2 * self.ys.len() - 1
        }
    }

    /// Exact representative coordinate of fine index `i` along x.
    pub fn sample_x(&self, i: usize) -> Rat {
        if i % 2 == 0 {
            self.xs[i / 2].clone()
        } else {
            Rat::mid(&self.xs[i / 2], &self.xs[i / 2 + 1])
        }
    }

    pub fn sample_y(&self, j: usize) -> Rat {
        if j % 2 == 0 {
            self.ys[j / 2].clone()
        } else {
            Rat::mid(&self.ys[j / 2], &self.ys[j / 2 + 1])
        }
    }

    /// Exact representative point of face `(i, j)`.
    pub fn sample(&self, i: usize, j: usize) -> Point {
        Point::new(self.sample_x(i), self.sample_y(j))
    }

    /// Closure of face `(i, j)` as a rect.
    pub fn face_closure(&self, i: usize, j: usize) -> Rect {
        let (xlo, xhi) = if i % 2 == 0 {
            (self.xs[i / 2].clone(), self.xs[i / 2].clone())
        } else {
            (self.xs[i / 2].clone(), self.xs[i / 2 + 1].clone())
        };
        let (ylo, yhi) = if j % 2 == 0 {
            (self.ys[j / 2].clone(), self.ys[j / 2].clone())
        } else {
            (self.ys[j / 2].clone(), self.ys[j / 2 + 1].clone())
        };
        Rect::new(xlo, xhi, ylo, yhi)
    }

    /// Position of `x` in the x-coordinate list, if present.
    pub fn x_pos(&self, x: &Rat) -> Option<usize> {
        self.xs.binary_search(x).ok()
    }

    pub fn y_pos(&self, y: &Rat) -> Option<usize> {
        self.ys.binary_search(y).ok()
    }
}

/// Boolean labeling of the faces of a grid.
#[derive(Clone)]
pub struct FaceMask {
    nx: usize,
    ny: usize,
    bits: Vec<bool>,
}

impl FaceMask {
    /// Labels each face of `grid` by membership in `region`.
    pub fn from_region(grid: &Grid, region: &Region) -> FaceMask {
        FaceMask::from_predicate(grid, |p| region.contains_point(p))
    }

    /// Labels each face by an arbitrary predicate of its representative point.
    ///
    /// The caller is responsible for only using predicates that are constant
    /// on the faces of `grid` (i.e. all predicate breakpoints appear among the
    /// grid coordinates).
    pub fn from_predicate(grid: &Grid, mut pred: impl FnMut(&Point) -> bool) -> FaceMask {
        let (nx, ny) = (grid.nx(), grid.ny());
        let mut bits = vec![false; nx * ny];
        for i in 0..nx {
            let x = grid.sample_x(i);
            for j in 0..ny {
                let p = Point::new(x.clone(), grid.sample_y(j));
                bits[i * ny + j] = pred(&p);
            }
        }
        FaceMask { nx, ny, bits }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.ny + j]
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    /// Connected components of the true faces.
    ///
    /// Two faces whose fine indices differ by at most one in each axis always
    /// have intersecting closures, and for a closed region the shared boundary
    /// belongs to the region; so path-components of the region are exactly the
    /// 8-connected components of the true faces. Components and their faces
    /// come out in deterministic scan order.
    pub fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen = vec![false; self.bits.len()];
        let mut out = Vec::new();
        for start in 0..self.bits.len() {
            if !self.bits[start] || seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::new();
            seen[start] = true;
            queue.push_back(start);
            while let Some(idx) = queue.pop_front() {
                let (i, j) = (idx / self.ny, idx % self.ny);
                comp.push((i, j));
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni >= self.nx as i64 || nj >= self.ny as i64 {
                            continue;
                        }
                        let nidx = ni as usize * self.ny + nj as usize;
                        if self.bits[nidx] && !seen[nidx] {
                            seen[nidx] = true;
                            queue.push_back(nidx);
                        }
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

/// A finite union of closed rectangles in canonical maximal-rect form.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Region {
    rects: Vec<Rect>,
}

impl Region {
    /// Builds a region from any list of rects, canonicalizing it.
    pub fn new(rects: Vec<Rect>) -> Region {
        Region {
            rects: canonical_rects(&rects),
        }
    }

    pub fn empty() -> Region {
        Region { rects: Vec::new() }
    }

    pub fn from_rect(r: Rect) -> Region {
        Region { rects: vec![r] }
    }

    /// The canonical list: all maximal rects, sorted by `(xlo, ylo, xhi, yhi)`.
    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Bounding box, or `None` for the empty region.
    pub fn bbox(&self) -> Option<Rect> {
        let mut it = self.rects.iter();
        let first = it.next()?;
        Some(it.fold(first.clone(), |acc, r| acc.bounding(r)))
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.rects.iter().any(|r| r.contains_point(p))
    }

    /// Grid over this region's own coordinates.
    pub fn grid(&self) -> Grid {
        Grid::from_rects(&self.rects)
    }

    /// Set union.
    pub fn union(&self, other: &Region) -> Region {
        let mut rects = self.rects.clone();
        rects.extend(other.rects.iter().cloned());
        Region::new(rects)
    }

    /// Set intersection (exact: pairwise rect intersections, re-canonicalized).
    pub fn intersect(&self, other: &Region) -> Region {
        let mut rects = Vec::new();
        for a in &self.rects {
            for b in &other.rects {
                if let Some(r) = a.intersect(b) {
                    rects.push(r);
                }
            }
        }
        Region::new(rects)
    }

    pub fn intersects(&self, other: &Region) -> bool {
        self.rects
            .iter()
            .any(|a| other.rects.iter().any(|b| a.intersects(b)))
    }

    pub fn intersects_rect(&self, r: &Rect) -> bool {
        self.rects.iter().any(|a| a.intersects(r))
    }

    /// `q ⊆ self`, decided by the arrangement face test over the combined
    /// coordinates of `self` and `q`.
    pub fn contains_rect(&self, q: &Rect) -> bool {
        let mut xs: Vec<Rat> = vec![q.left().clone(), q.right().clone()];
        let mut ys: Vec<Rat> = vec![q.bottom().clone(), q.top().clone()];
        for r in &self.rects {
            xs.push(r.left().clone());
            xs.push(r.right().clone());
            ys.push(r.bottom().clone());
            ys.push(r.top().clone());
        }
        let grid = Grid::new(xs, ys);
        let (i0, i1) = (
            2 * grid.x_pos(q.left()).expect("q.left in grid"),
            2 * grid.x_pos(q.right()).expect("q.right in grid"),
        );
        let (j0, j1) = (
            2 * grid.y_pos(q.bottom()).expect("q.bottom in grid"),
            2 * grid.y_pos(q.top()).expect("q.top in grid"),
        );
        for i in i0..=i1 {
            let x = grid.sample_x(i);
            for j in j0..=j1 {
                if !self.contains_point(&Point::new(x.clone(), grid.sample_y(j))) {
                    return false;
                }
            }
        }
        true
    }

    /// `other ⊆ self`, over the combined arrangement of both regions.
    pub fn contains_region(&self, other: &Region) -> bool {
        if other.is_empty() {
            return true;
        }
        let mut rects: Vec<&Rect> = self.rects.iter().collect();
        rects.extend(other.rects.iter());
        let grid = Grid::from_rects(rects.into_iter());
        for i in 0..grid.nx() {
            let x = grid.sample_x(i);
            for j in 0..grid.ny() {
                let p = Point::new(x.clone(), grid.sample_y(j));
                if other.contains_point(&p) && !self.contains_point(&p) {
                    return false;
                }
            }
        }
        true
    }

    /// Path-connectivity (vacuously true for the empty region).
    pub fn is_connected(&self) -> bool {
        if self.rects.len() <= 1 {
            return true;
        }
        let grid = self.grid();
        FaceMask::from_region(&grid, self).components().len() <= 1
    }

    /// Image under an axis-parallel affine map. Affine bijections send
    /// maximal rects to maximal rects, so only the ordering needs fixing, but
    /// the full canonicalizer is cheap and keeps this obviously correct.
    pub fn transformed(&self, t: &Transform) -> Region {
        Region::new(self.rects.iter().map(|r| t.apply_rect(r)).collect())
    }
}

impl std::fmt::Debug for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rects.iter()).finish()
    }
}

/// Computes the set of all maximal rectangles contained in the union of
/// `rects`, sorted lexicographically.
///
/// A rect is *maximal* when it is contained in the union and cannot be grown
/// in any one of the four axis directions while staying inside. The search
/// runs over the fine grid of the inputs: for every pair of even y-indices it
/// finds the maximal runs of fully-covered columns (x-maximality), then keeps
/// the runs that cannot absorb the adjacent fine row below or above
/// (y-maximality). Because any rect inside the union snaps outward to grid
/// lines, this enumerates every maximal rect exactly once, and the result
/// depends only on the union as a point set — not on how it was presented.
fn canonical_rects(rects: &[Rect]) -> Vec<Rect> {
    if rects.is_empty() {
        return Vec::new();
    }
    let grid = Grid::from_rects(rects.iter());
    let (nx, ny) = (grid.nx(), grid.ny());
    let contains = |p: &Point| rects.iter().any(|r| r.contains_point(p));
    let mask = FaceMask::from_predicate(&grid, contains);

    let mut out: Vec<Rect> = Vec::new();
    let mut colfull = vec![false; nx];
    for jlo in (0..ny).step_by(2) {
        for (i, slot) in colfull.iter_mut().enumerate() {
            *slot = mask.get(i, jlo);
        }
        let mut jhi = jlo;
        loop {
            if jhi % 2 == 0 {
                // Scan maximal runs of fully-covered columns.
                let mut i = 0;
                while i < nx {
                    if !colfull[i] {
                        i += 1;
                        continue;
                    }
                    let a = i;
                    while i < nx && colfull[i] {
                        i += 1;
                    }
                    let b = i - 1;
                    // Closed unions always extend runs to grid lines.
                    debug_assert!(a % 2 == 0 && b % 2 == 0);
                    let grow_down =
                        jlo > 0 && (a..=b).all(|col| mask.get(col, jlo - 1));
                    let grow_up =
                        jhi + 1 < ny && (a..=b).all(|col| mask.get(col, jhi + 1));
                    if !grow_down && !grow_up {
                        out.push(Rect::new(
                            grid.xs()[a / 2].clone(),
                            grid.xs()[b / 2].clone(),
                            grid.ys()[jlo / 2].clone(),
                            grid.ys()[jhi / 2].clone(),
                        ));
                    }
                }
            }
            jhi += 1;
            if jhi >= ny {
                break;
            }
            for (i, slot) in colfull.iter_mut().enumerate() {
                *slot = *slot && mask.get(i, jhi);
            }
            if colfull.iter().all(|&b| !b) {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(xlo: i64, xhi: i64, ylo: i64, yhi: i64) -> Region {
        Region::new(vec![
            Rect::ints(xlo, xlo, ylo, yhi),
            Rect::ints(xhi, xhi, ylo, yhi),
            Rect::ints(xlo, xhi, ylo, ylo),
            Rect::ints(xlo, xhi, yhi, yhi),
        ])
    }

    #[test]
    fn canonical_form_merges_overlapping_cover() {
        // Two overlapping solid rects covering [0,3]x[0,1].
        let r = Region::new(vec![Rect::ints(0, 2, 0, 1), Rect::ints(1, 3, 0, 1)]);
        assert_eq!(r.rects(), &[Rect::ints(0, 3, 0, 1)]);
        // Same set presented in one piece: canonical forms agree.
        assert_eq!(r, Region::from_rect(Rect::ints(0, 3, 0, 1)));
    }

    #[test]
    fn canonical_form_drops_contained_rects() {
        let r = Region::new(vec![Rect::ints(0, 3, 1, 1), Rect::ints(1, 2, 1, 1)]);
        assert_eq!(r.rects(), &[Rect::ints(0, 3, 1, 1)]);
    }

    #[test]
    fn frame_canonicalizes_to_four_edges() {
        let f = frame(0, 3, 0, 3);
        assert_eq!(
            f.rects(),
            &[
                Rect::ints(0, 0, 0, 3),
                Rect::ints(0, 3, 0, 0),
                Rect::ints(0, 3, 3, 3),
                Rect::ints(3, 3, 0, 3),
            ]
        );
        // Filling the interior collapses everything to one solid rect.
        let solid = f.union(&Region::from_rect(Rect::ints(0, 3, 0, 3)));
        assert_eq!(solid.rects(), &[Rect::ints(0, 3, 0, 3)]);
    }

    #[test]
    fn plus_shape_has_two_maximal_rects() {
        let plus = Region::new(vec![Rect::ints(1, 2, 0, 3), Rect::ints(0, 3, 1, 2)]);
        assert_eq!(
            plus.rects(),
            &[Rect::ints(0, 3, 1, 2), Rect::ints(1, 2, 0, 3)]
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let r = Region::new(vec![
            Rect::ints(0, 2, 0, 2),
            Rect::ints(2, 4, 0, 1),
            Rect::ints(3, 3, 0, 5),
        ]);
        let again = Region::new(r.rects().to_vec());
        assert_eq!(r, again);
    }

    #[test]
    fn bbox_covers_all_rects() {
        let r = Region::new(vec![Rect::ints(0, 3, 0, 0), Rect::ints(0, 0, 0, 3)]);
        assert_eq!(r.bbox(), Some(Rect::ints(0, 3, 0, 3)));
        assert_eq!(Region::empty().bbox(), None);
    }

    #[test]
    fn membership_on_frame_boundary() {
        let f = frame(0, 3, 0, 3);
        assert!(f.contains_point(&Point::ints(3, 1)));
        assert!(f.contains_point(&Point::ints(0, 0)));
        assert!(!f.contains_point(&Point::new(Rat::new(3, 2), Rat::new(3, 2))));
    }

    #[test]
    fn contains_rect_sees_interior_gaps() {
        let f = frame(0, 3, 0, 3);
        // The center of [1,2]^2 is not on the frame.
        assert!(!f.contains_rect(&Rect::ints(1, 2, 1, 2)));
        assert!(f.contains_rect(&Rect::ints(0, 0, 1, 2)));
        let solid = Region::from_rect(Rect::ints(0, 3, 0, 3));
        assert!(solid.contains_rect(&Rect::ints(1, 2, 1, 2)));
    }

    #[test]
    fn intersection_of_touching_frames() {
        let a = frame(0, 2, 0, 2);
        let b = frame(2, 4, 0, 2);
        let meet = a.intersect(&b);
        assert!(!meet.is_empty());
        assert_eq!(meet.rects(), &[Rect::ints(2, 2, 0, 2)]);
    }

    #[test]
    fn corner_touching_rects_are_connected() {
        let r = Region::new(vec![Rect::ints(0, 1, 0, 1), Rect::ints(1, 2, 1, 2)]);
        assert!(r.is_connected());
        let apart = Region::new(vec![Rect::ints(0, 1, 0, 1), Rect::ints(2, 3, 0, 1)]);
        assert!(!apart.is_connected());
    }

    #[test]
    fn frame_is_connected_but_diagonal_segments_are_not() {
        assert!(frame(0, 3, 0, 3).is_connected());
        let two = Region::new(vec![Rect::ints(0, 1, 0, 0), Rect::ints(2, 3, 1, 1)]);
        assert!(!two.is_connected());
    }

    #[test]
    fn region_equality_is_set_equality() {
        // An L written two ways.
        let a = Region::new(vec![Rect::ints(0, 1, 0, 3), Rect::ints(0, 3, 0, 1)]);
        let b = Region::new(vec![
            Rect::ints(0, 1, 1, 3),
            Rect::ints(0, 3, 0, 1),
            Rect::ints(0, 1, 0, 2),
        ]);
        assert_eq!(a, b);
        let c = Region::new(vec![Rect::ints(0, 1, 0, 3), Rect::ints(0, 3, 0, 2)]);
        assert_ne!(a, c);
    }

    #[test]
    fn transform_of_region_recanonicalizes() {
        let f = frame(0, 3, 0, 3);
        let refl = f.transformed(&Transform::reflect_horizontal());
        assert_eq!(
            refl.bbox(),
            Some(Rect::ints(-3, 0, 0, 3))
        );
        // Reflecting twice returns the original canonical form.
        assert_eq!(refl.transformed(&Transform::reflect_horizontal()), f);
    }

    #[test]
    fn contains_region_handles_degenerate_pieces() {
        let f = frame(0, 3, 0, 3);
        let left_edge = Region::from_rect(Rect::ints(0, 0, 0, 3));
        assert!(f.contains_region(&left_edge));
        assert!(!left_edge.contains_region(&f));
        assert!(f.contains_region(&Region::empty()));
    }
}
