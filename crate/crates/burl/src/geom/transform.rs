//! Axis-parallel affine transformations of the plane.
//!
//! A [`Transform`] maps `(x, y)` to `(a*x + c, b*y + d)` with `a, b` nonzero.
//! These are exactly the affine maps that send axis-parallel rectangles to
//! axis-parallel rectangles. A transform is *positive* when both scale
//! factors are positive; positive transforms preserve left/right and
//! bottom/top, which is what every structural argument in this crate relies
//! on. Negative scales are still useful — the horizontal reflection used to
//! turn a shape around is `a = -1`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::Point;
use super::rat::Rat;
use super::rect::Rect;

/// `(x, y) -> (a*x + c, b*y + d)` with `a != 0`, `b != 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct Transform {
    a: Rat,
    b: Rat,
    c: Rat,
    d: Rat,
}

impl Transform {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Transform {
        assert!(!a.is_zero(), "transform with a = 0 is not invertible");
        assert!(!b.is_zero(), "transform with b = 0 is not invertible");
        Transform { a, b, c, d }
    }

    pub fn identity() -> Transform {
        Transform::new(Rat::one(), Rat::one(), Rat::zero(), Rat::zero())
    }

    /// The horizontal reflection `(x, y) -> (-x, y)`.
    pub fn reflect_horizontal() -> Transform {
        Transform::new(-Rat::one(), Rat::one(), Rat::zero(), Rat::zero())
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn d(&self) -> &Rat {
        &self.d
    }

    /// Both scale factors strictly positive.
    pub fn is_positive(&self) -> bool {
        self.a.is_positive() && self.b.is_positive()
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        Point::new(&self.a * &p.x + &self.c, &self.b * &p.y + &self.d)
    }

    /// Image of a rect; endpoints swap when a scale factor is negative.
    pub fn apply_rect(&self, r: &Rect) -> Rect {
        let x1 = &self.a * r.left() + &self.c;
        let x2 = &self.a * r.right() + &self.c;
        let y1 = &self.b * r.bottom() + &self.d;
        let y2 = &self.b * r.top() + &self.d;
        Rect::new(
            Rat::min(x1.clone(), x2.clone()),
            Rat::max(x1, x2),
            Rat::min(y1.clone(), y2.clone()),
            Rat::max(y1, y2),
        )
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Transform) -> Transform {
        Transform::new(
            &self.a * &other.a,
            &self.b * &other.b,
            &self.a * &other.c + &self.c,
            &self.b * &other.d + &self.d,
        )
    }

    pub fn invert(&self) -> Transform {
        let a = self.a.recip();
        let b = self.b.recip();
        let c = -(&self.c * &a);
        let d = -(&self.d * &b);
        Transform::new(a, b, c, d)
    }

    /// The unique positive transform mapping `from` onto `to`.
    ///
    /// Both rects must be non-degenerate in both axes.
    pub fn box_to_box(from: &Rect, to: &Rect) -> Transform {
        assert!(
            from.width().is_positive() && from.height().is_positive(),
            "box_to_box source must be non-degenerate, got {from:?}"
        );
        assert!(
            to.width().is_positive() && to.height().is_positive(),
            "box_to_box target must be non-degenerate, got {to:?}"
        );
        let a = to.width() / from.width();
        let b = to.height() / from.height();
        let c = to.left() - &a * from.left();
        let d = to.bottom() - &b * from.bottom();
        Transform::new(a, b, c, d)
    }
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x, y) -> ({}*x + {}, {}*y + {})",
            self.a, self.c, self.b, self.d
        )
    }
}

/// Serialized as the 4-tuple `["a", "b", "c", "d"]` of rational strings.
impl Serialize for Transform {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.a, &self.b, &self.c, &self.d).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Transform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Transform, D::Error> {
        let (a, b, c, d) = <(Rat, Rat, Rat, Rat)>::deserialize(deserializer)?;
        if a.is_zero() || b.is_zero() {
            return Err(D::Error::custom("transform with zero scale factor"));
        }
        Ok(Transform { a, b, c, d })
    }
}
