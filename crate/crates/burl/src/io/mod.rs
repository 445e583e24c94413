//! Serialization and rendering: versioned JSON documents for scenes and
//! graphs, DOT export, and SVG rendering of scenes.
//!
//! # Documents
//!
//! A [`SceneDoc`] stores everything needed to rebuild a
//! [`Scene`](crate::construction::Scene): the base shape's rectangles,
//! whether the working copy is the reflection, the certified subterritory,
//! and every family member with its provenance (level, originating prob,
//! and the transform that produced it from the base). Loading re-validates
//! placement — prob ids unique, probs right-flush and pairwise disjoint —
//! but *not* stability, so a checker can load a broken scene in order to
//! report exactly what is broken.
//!
//! A [`GraphDoc`] stores a vertex list and either `arcs` (oriented) or
//! `edges` (plain), never both. Oriented documents can be read as plain
//! graphs by forgetting directions; the reverse is an error.
//!
//! All coordinates serialize as exact rational strings (`"5/3"`, `"2"`);
//! nothing is rounded until SVG rendering, which converts to `f64` at the
//! last moment. Both document types carry a `version` field and loading
//! rejects versions this code does not understand.
//!
//! # Determinism
//!
//! Serialization, DOT export, and SVG rendering are pure functions of their
//! input: equal inputs give byte-identical output.

mod dot;
mod graph_doc;
mod scene_doc;
mod svg;

pub use dot::{graph_dot, graph_dot_annotated, ograph_dot, ograph_dot_annotated};
pub use graph_doc::{GraphDoc, GRAPH_VERSION};
pub use scene_doc::{SceneDoc, ShapeDoc, SCENE_VERSION};
pub use svg::scene_svg;

use thiserror::Error;

use crate::construction::ConstructionError;
use crate::graph::GraphError;
use crate::relations::FamilyError;
use crate::shape::ShapeError;

/// Errors from parsing, validating, or rebuilding documents.
#[derive(Debug, Error)]
pub enum IoError {
    /// The document's `version` field names a format this code does not read.
    #[error("bad-version: document has version {found}, expected {expected}")]
    BadVersion { found: u32, expected: u32 },
    /// The document parsed but its contents are not usable.
    #[error("invalid document: {0}")]
    Invalid(String),
    /// Malformed JSON; the message includes line and column.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
