use serde::{Deserialize, Serialize};

use super::IoError;
use crate::construction::{Prob, Provenance, Scene};
use crate::geom::{Rect, Region};
use crate::relations::{Family, FamilyBase};
use crate::shape::{certify_subterritory, Shape};

/// Scene document format version accepted by [`SceneDoc::to_scene`].
pub const SCENE_VERSION: u32 = 1;

/// On-disk form of a [`Scene`]. See the [module docs](super) for the
/// validation split between loading and checking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneDoc {
    pub version: u32,
    /// Rectangles of the base shape as originally given, before any
    /// reflection chosen to make its territory non-empty.
    pub base_shape: Vec<Rect>,
    /// Whether the working copy of the base is its horizontal reflection.
    pub reflected: bool,
    /// The certified subterritory rectangle of the (possibly reflected) base.
    pub sub: Rect,
    pub level: u32,
    pub shapes: Vec<ShapeDoc>,
    pub probs: Vec<Prob>,
}

/// One family member: its rectangles plus the record of where it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeDoc {
    pub id: String,
    pub rects: Vec<Rect>,
    pub provenance: Provenance,
}

impl SceneDoc {
    /// Captures a scene as a document.
    pub fn from_scene(scene: &Scene) -> SceneDoc {
        let base = scene.base();
        let shapes = scene
            .family()
            .shapes()
            .iter()
            .map(|s| ShapeDoc {
                id: s.id().to_string(),
                rects: s.region().rects().to_vec(),
                provenance: scene
                    .provenance_of(s.id())
                    .expect("every family member has a provenance record")
                    .clone(),
            })
            .collect();
        SceneDoc {
            version: SCENE_VERSION,
            base_shape: base.original().region().rects().to_vec(),
            reflected: base.reflected(),
            sub: scene.sub().rect.clone(),
            level: scene.level(),
            shapes,
            probs: scene.probs().to_vec(),
        }
    }

    /// Rebuilds the scene, re-validating everything the document claims:
    /// the base is a Pouna set made strong by the recorded reflection (or
    /// lack of one), `sub` is one of its subterritories, every member is
    /// strong, and the probs are well-placed.
    pub fn to_scene(&self) -> Result<Scene, IoError> {
        if self.version != SCENE_VERSION {
            return Err(IoError::BadVersion {
                found: self.version,
                expected: SCENE_VERSION,
            });
        }
        let original = Shape::new("base", Region::new(self.base_shape.clone()))?;
        let base = FamilyBase::new(original)?;
        if base.reflected() != self.reflected {
            return Err(IoError::Invalid(format!(
                "document says reflected={}, but the base shape {} reflection to become strong",
                self.reflected,
                if base.reflected() { "needs" } else { "needs no" },
            )));
        }
        let sub = certify_subterritory(&self.sub, base.effective())?;
        let mut shapes = Vec::with_capacity(self.shapes.len());
        let mut provenance = std::collections::BTreeMap::new();
        for doc in &self.shapes {
            shapes.push(Shape::new(doc.id.clone(), Region::new(doc.rects.clone()))?);
            provenance.insert(doc.id.clone(), doc.provenance.clone());
        }
        let family = Family::new(shapes, Some(base))?;
        Ok(Scene::from_parts(
            family,
            self.probs.clone(),
            sub,
            self.level,
            provenance,
        )?)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene documents serialize");
        s.push('\n');
        s
    }

    /// Parses a document without rebuilding the scene.
    pub fn from_json(text: &str) -> Result<SceneDoc, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::burling_sequence;

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

    #[test]
    fn scene_round_trips_through_json_bit_exactly() {
        let scene = burling_sequence(frame(), 2).expect("level 2 builds");
        let doc = SceneDoc::from_scene(&scene);
        let json = doc.to_json();
        let reparsed = SceneDoc::from_json(&json).expect("round-trip parses");
        assert_eq!(doc, reparsed, "document must survive JSON unchanged");
        assert_eq!(json, reparsed.to_json(), "serialization must be stable");

        let rebuilt = reparsed.to_scene().expect("round-trip scene rebuilds");
        assert_eq!(rebuilt.level(), scene.level());
        assert_eq!(rebuilt.probs(), scene.probs());
        assert_eq!(
            rebuilt.family().len(),
            scene.family().len(),
            "family size must survive the round trip"
        );
        let again = SceneDoc::from_scene(&rebuilt);
        assert_eq!(doc, again, "rebuild must not alter the document");
    }

    #[test]
    fn version_mismatch_is_rejected_as_bad_version() {
        let scene = burling_sequence(frame(), 1).expect("level 1 builds");
        let mut doc = SceneDoc::from_scene(&scene);
        doc.version = 99;
        let err = doc.to_scene().expect_err("version 99 must be rejected");
        assert!(
            err.to_string().contains("bad-version"),
            "error must name bad-version, got: {err}"
        );
    }

    #[test]
    fn coordinates_serialize_as_rational_strings() {
        let scene = burling_sequence(frame(), 2).expect("level 2 builds");
        let json = SceneDoc::from_scene(&scene).to_json();
        assert!(
            json.contains('/'),
            "level-2 scenes have non-integer coordinates; they must appear as p/q strings"
        );
        assert!(
            !json.contains('.'),
            "no floating-point numbers may appear anywhere in scene JSON"
        );
    }

    #[test]
    fn a_lying_reflection_flag_is_rejected() {
        let scene = burling_sequence(frame(), 1).expect("level 1 builds");
        let mut doc = SceneDoc::from_scene(&scene);
        doc.reflected = true;
        let err = doc.to_scene().expect_err("the frame needs no reflection");
        assert!(
            matches!(err, IoError::Invalid(_)),
            "mismatched reflection flag should be an invalid-document error, got: {err}"
        );
    }

    #[test]
    fn malformed_json_reports_line_and_column() {
        let err = SceneDoc::from_json("{\n  \"version\": 1,\n  oops\n}")
            .expect_err("garbage must not parse");
        let msg = err.to_string();
        assert!(
            msg.contains("line 3"),
            "parse errors must carry the line number, got: {msg}"
        );
    }
}
