//! Exact rational plane geometry: numbers, points, rects, axis-parallel
//! affine maps, and rectilinear regions with set-level predicates.

mod point;
mod rat;
mod rect;
mod region;
mod transform;

pub use point::Point;
pub use rat::{ParseRatError, Rat};
pub use rect::Rect;
pub use region::{FaceMask, Grid, Region};
pub use transform::Transform;
