//! Exact rectilinear geometry toolkit for Burling-style triangle-free
//! constructions with large chromatic number.
//!
//! The crate builds, layer by layer:
//!
//! * [`geom`] — exact rational arithmetic, rects, axis-parallel affine maps,
//!   and canonical rectilinear regions;
//! * [`shape`] — Pouna sets (compact, path-connected rectilinear sets that
//!   are not single rects), their territories, and subterritories;
//! * [`relations`] — the order (`≺`) and intersection (`↷`) relations between
//!   shapes, and the constraint battery a constrained family must satisfy;
//! * [`burling`] — oriented graphs with order/arrow triples and the four
//!   Burling-set axioms;
//! * [`recognize`] — search procedures deciding whether an (oriented) graph
//!   admits a Burling-set structure;
//! * [`construction`] — the recursive geometric construction producing the
//!   triangle-free families of unbounded chromatic number;
//! * [`graph`] — plain-graph diagnostics: triangle-freeness, clique number,
//!   exact chromatic number;
//! * [`sample`] — seeded random generators for shapes and transforms;
//! * [`io`] — JSON documents for scenes and graphs, DOT and SVG export.

pub mod burling;
pub mod construction;
pub mod geom;
pub mod graph;
pub mod io;
pub mod recognize;
pub mod relations;
pub mod sample;
pub mod shape;
