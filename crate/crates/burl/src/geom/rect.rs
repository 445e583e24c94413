//! Closed axis-parallel rectangles, possibly degenerate.
//!
//! A [`Rect`] is the product of two closed intervals `[xlo, xhi] x [ylo, yhi]`
//! with `xlo <= xhi` and `ylo <= yhi`. Degenerate rectangles — vertical or
//! horizontal segments, and single points — are first-class values: the
//! shapes this crate works with are very often built from them. The *empty*
//! rectangle is deliberately not representable; operations that can produce
//! it (intersection, most prominently) return `Option<Rect>` instead, so no
//! sentinel coordinates ever leak into arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::Point;
use super::rat::Rat;

/// A non-empty closed axis-parallel rectangle.
#[derive(Clone, PartialEq, Eq)]
pub struct Rect {
    xlo: Rat,
    xhi: Rat,
    ylo: Rat,
    yhi: Rat,
}

impl Rect {
    /// Builds `[xlo, xhi] x [ylo, yhi]`.
    ///
    /// Panics unless `xlo <= xhi` and `ylo <= yhi`; use [`Rect::from_corners`]
    /// for possibly-unordered endpoints.
    pub fn new(xlo: Rat, xhi: Rat, ylo: Rat, yhi: Rat) -> Rect {
        assert!(xlo <= xhi, "rect with xlo > xhi: {xlo} > {xhi}");
        assert!(ylo <= yhi, "rect with ylo > yhi: {ylo} > {yhi}");
        Rect { xlo, xhi, ylo, yhi }
    }

    /// Builds a rect from two opposite corners in any order.
    pub fn from_corners(a: &Point, b: &Point) -> Rect {
        Rect::new(
            Rat::min(a.x.clone(), b.x.clone()),
            Rat::max(a.x.clone(), b.x.clone()),
            Rat::min(a.y.clone(), b.y.clone()),
            Rat::max(a.y.clone(), b.y.clone()),
        )
    }

    /// Integer-coordinate convenience constructor.
    pub fn ints(xlo: i64, xhi: i64, ylo: i64, yhi: i64) -> Rect {
        Rect::new(Rat::int(xlo), Rat::int(xhi), Rat::int(ylo), Rat::int(yhi))
    }

    pub fn left(&self) -> &Rat {
        &self.xlo
    }

    pub fn right(&self) -> &Rat {
        &self.xhi
    }

    pub fn bottom(&self) -> &Rat {
        &self.ylo
    }

    pub fn top(&self) -> &Rat {
        &self.yhi
    }

    pub fn width(&self) -> Rat {
        &self.xhi - &self.xlo
    }

    pub fn height(&self) -> Rat {
        &self.yhi - &self.ylo
    }

    /// True when the rect has zero width or zero height (segment or point).
    pub fn is_degenerate(&self) -> bool {
        self.xlo == self.xhi || self.ylo == self.yhi
    }

    pub fn center(&self) -> Point {
        Point::new(Rat::mid(&self.xlo, &self.xhi), Rat::mid(&self.ylo, &self.yhi))
    }

    /// The four corners (degenerate rects repeat coordinates).
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.xlo.clone(), self.ylo.clone()),
            Point::new(self.xhi.clone(), self.ylo.clone()),
            Point::new(self.xlo.clone(), self.yhi.clone()),
            Point::new(self.xhi.clone(), self.yhi.clone()),
        ]
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.xlo <= p.x && p.x <= self.xhi && self.ylo <= p.y && p.y <= self.yhi
    }

    /// Interval containment: every point of `other` lies in `self`.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.xlo <= other.xlo
            && other.xhi <= self.xhi
            && self.ylo <= other.ylo
            && other.yhi <= self.yhi
    }

    /// `self ∩ other`, or `None` when the closed rects are disjoint.
    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let xlo = Rat::max(self.xlo.clone(), other.xlo.clone());
        let xhi = Rat::min(self.xhi.clone(), other.xhi.clone());
        let ylo = Rat::max(self.ylo.clone(), other.ylo.clone());
        let yhi = Rat::min(self.yhi.clone(), other.yhi.clone());
        if xlo <= xhi && ylo <= yhi {
            Some(Rect::new(xlo, xhi, ylo, yhi))
        } else {
            None
        }
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.xlo <= other.xhi
            && other.xlo <= self.xhi
            && self.ylo <= other.yhi
            && other.ylo <= self.yhi
    }

    /// Smallest rect containing both inputs.
    pub fn bounding(&self, other: &Rect) -> Rect {
        Rect::new(
            Rat::min(self.xlo.clone(), other.xlo.clone()),
            Rat::max(self.xhi.clone(), other.xhi.clone()),
            Rat::min(self.ylo.clone(), other.ylo.clone()),
            Rat::max(self.yhi.clone(), other.yhi.clone()),
        )
    }
}

impl PartialOrd for Rect {
    fn partial_cmp(&self, other: &Rect) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by `(xlo, ylo, xhi, yhi)` — the order canonical regions use.
impl Ord for Rect {
    fn cmp(&self, other: &Rect) -> Ordering {
        (&self.xlo, &self.ylo, &self.xhi, &self.yhi).cmp(&(
            &other.xlo,
            &other.ylo,
            &other.xhi,
            &other.yhi,
        ))
    }
}

impl fmt::Debug for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]x[{}, {}]",
            self.xlo, self.xhi, self.ylo, self.yhi
        )
    }
}

/// Serialized as the 4-tuple `["xlo", "xhi", "ylo", "yhi"]` of rational strings.
impl Serialize for Rect {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.xlo, &self.xhi, &self.ylo, &self.yhi).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rect {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rect, D::Error> {
        let (xlo, xhi, ylo, yhi) = <(Rat, Rat, Rat, Rat)>::deserialize(deserializer)?;
        if xlo > xhi || ylo > yhi {
            return Err(D::Error::custom(format!(
                "rect endpoints out of order: [{xlo}, {xhi}]x[{ylo}, {yhi}]"
            )));
        }
        Ok(Rect { xlo, xhi, ylo, yhi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors_and_measures() {
        let r = Rect::ints(0, 10, 2, 8);
        assert_eq!(r.width(), Rat::int(10));
        assert_eq!(r.height(), Rat::int(6));
        assert!(!r.is_degenerate());
        assert!(Rect::ints(0, 10, 2, 2).is_degenerate());
        assert!(Rect::ints(3, 3, 4, 4).is_degenerate());
    }

    #[test]
    fn containment_is_closed() {
        let r = Rect::ints(0, 3, 0, 3);
        assert!(r.contains_point(&Point::ints(0, 0)));
        assert!(r.contains_point(&Point::ints(3, 1)));
        assert!(!r.contains_point(&Point::ints(4, 1)));
        assert!(r.contains_rect(&Rect::ints(1, 2, 0, 3)));
        assert!(!r.contains_rect(&Rect::ints(1, 4, 0, 3)));
    }

    #[test]
    fn intersection_keeps_shared_boundary() {
        let a = Rect::ints(0, 2, 0, 2);
        let b = Rect::ints(2, 4, 1, 3);
        // Closed rects that only share an edge still intersect.
        assert_eq!(a.intersect(&b), Some(Rect::ints(2, 2, 1, 2)));
        assert!(a.intersects(&b));
        assert_eq!(a.intersect(&Rect::ints(3, 4, 0, 2)), None);
    }

    #[test]
    fn ordering_is_xlo_ylo_xhi_yhi() {
        let a = Rect::ints(0, 5, 1, 2);
        let b = Rect::ints(0, 1, 2, 3);
        // Same xlo; a has smaller ylo, so a < b despite larger xhi.
        assert!(a < b);
    }

    #[test]
    fn serde_round_trip() {
        let r = Rect::new(Rat::new(1, 3), Rat::int(2), Rat::int(0), Rat::new(7, 2));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "[\"1/3\",\"2\",\"0\",\"7/2\"]");
        let back: Rect = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        // Out-of-order endpoints are rejected at parse time.
        assert!(serde_json::from_str::<Rect>("[\"2\",\"1\",\"0\",\"0\"]").is_err());
    }
}
