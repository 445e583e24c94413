//! Points of the rational plane.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::Rat;

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    /// Integer-coordinate convenience constructor.
    pub fn ints(x: i64, y: i64) -> Point {
        Point::new(Rat::int(x), Rat::int(y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}
