use serde::{Deserialize, Serialize};

use super::IoError;
use crate::burling::OGraph;
use crate::graph::Graph;

/// Graph document format version accepted by the `to_*` converters.
pub const GRAPH_VERSION: u32 = 1;

/// On-disk form of a graph: vertices plus either `arcs` (oriented) or
/// `edges` (plain), never both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub version: u32,
    pub vertices: Vec<String>,
    /// Directed pairs `(from, to)`; present in oriented documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<(String, String)>>,
    /// Unordered pairs; present in plain documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(String, String)>>,
    /// Optional enclosure witness: pairs `(a, b)` with `a ≺ b` in the
    /// family the graph was derived from. Carried for inspection only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_prec: Option<Vec<(String, String)>>,
}

impl GraphDoc {
    pub fn from_ograph(g: &OGraph, witness_prec: Option<Vec<(String, String)>>) -> GraphDoc {
        GraphDoc {
            version: GRAPH_VERSION,
            vertices: g.vertex_ids().to_vec(),
            arcs: Some(g.arc_ids()),
            edges: None,
            witness_prec,
        }
    }

    pub fn from_graph(g: &Graph) -> GraphDoc {
        GraphDoc {
            version: GRAPH_VERSION,
            vertices: g.vertex_ids().to_vec(),
            arcs: None,
            edges: Some(g.edge_ids()),
            witness_prec: None,
        }
    }

    fn check(&self) -> Result<(), IoError> {
        if self.version != GRAPH_VERSION {
            return Err(IoError::BadVersion {
                found: self.version,
                expected: GRAPH_VERSION,
            });
        }
        match (&self.arcs, &self.edges) {
            (Some(_), Some(_)) => Err(IoError::Invalid(
                "document carries both arcs and edges; exactly one is allowed".into(),
            )),
            (None, None) => Err(IoError::Invalid(
                "document carries neither arcs nor edges".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Rebuilds the oriented graph. Errors unless the document has `arcs`.
    pub fn to_ograph(&self) -> Result<OGraph, IoError> {
        self.check()?;
        let arcs = self.arcs.clone().ok_or_else(|| {
            IoError::Invalid("an oriented graph needs arcs, but this document has edges".into())
        })?;
        Ok(OGraph::new(self.vertices.clone(), arcs)?)
    }

    /// Rebuilds the plain graph, forgetting arc directions if the document
    /// is oriented.
    pub fn to_graph(&self) -> Result<Graph, IoError> {
        self.check()?;
        if let Some(edges) = &self.edges {
            return Ok(Graph::new(self.vertices.clone(), edges.clone())?);
        }
        let arcs = self.arcs.clone().expect("check() guarantees arcs or edges");
        Ok(OGraph::new(self.vertices.clone(), arcs)?.underlying())
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<GraphDoc, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn plain_graphs_round_trip_through_json() {
        let g = Graph::cycle(6);
        let doc = GraphDoc::from_graph(&g);
        let reparsed = GraphDoc::from_json(&doc.to_json()).expect("round-trip parses");
        assert_eq!(doc, reparsed);
        let back = reparsed.to_graph().expect("plain graph rebuilds");
        assert_eq!(back.n(), 6);
        assert_eq!(back.edge_count(), 6);
    }

    #[test]
    fn oriented_documents_open_both_ways() {
        let g = OGraph::new(
            ids(&["a", "b", "c"]),
            vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        )
        .expect("valid arcs");
        let doc = GraphDoc::from_ograph(&g, None);
        assert_eq!(doc.to_ograph().expect("arcs rebuild").arc_count(), 2);
        let plain = doc.to_graph().expect("directions can be forgotten");
        assert_eq!(plain.edge_count(), 2, "each arc becomes one edge");
    }

    #[test]
    fn plain_documents_refuse_to_become_oriented() {
        let doc = GraphDoc::from_graph(&Graph::cycle(3));
        let err = doc.to_ograph().expect_err("edges carry no orientation");
        assert!(
            matches!(err, IoError::Invalid(_)),
            "wanted an invalid-document error, got: {err}"
        );
    }

    #[test]
    fn carrying_both_arcs_and_edges_is_invalid() {
        let mut doc = GraphDoc::from_graph(&Graph::cycle(3));
        doc.arcs = Some(vec![]);
        assert!(doc.to_graph().is_err(), "ambiguous documents must not load");
    }

    #[test]
    fn version_mismatch_is_rejected_as_bad_version() {
        let mut doc = GraphDoc::from_graph(&Graph::cycle(3));
        doc.version = 0;
        let err = doc.to_graph().expect_err("version 0 must be rejected");
        assert!(err.to_string().contains("bad-version"));
    }
}
