use crate::burling::OGraph;
use crate::graph::Graph;

fn escape(id: &str) -> String {
    id.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render(
    header: &str,
    connector: &str,
    vertices: &[String],
    pairs: &[(String, String)],
    notes: &[String],
) -> String {
    let mut out = format!("{header} {{\n");
    if !notes.is_empty() {
        let label = notes.iter().map(|n| escape(n)).collect::<Vec<_>>().join("\\n");
        out.push_str(&format!("  label=\"{label}\";\n  labelloc=\"t\";\n"));
    }
    for id in vertices {
        out.push_str(&format!("  \"{}\";\n", escape(id)));
    }
    for (u, v) in pairs {
        out.push_str(&format!(
            "  \"{}\" {connector} \"{}\";\n",
            escape(u),
            escape(v)
        ));
    }
    out.push_str("}\n");
    out
}

/// Graphviz `digraph` text for an oriented graph: one node line per vertex
/// in stored order, one `->` line per arc in sorted order.
pub fn ograph_dot(g: &OGraph) -> String {
    ograph_dot_annotated(g, &[])
}

/// [`ograph_dot`] with note lines rendered as a graph-level label.
pub fn ograph_dot_annotated(g: &OGraph, notes: &[String]) -> String {
    render("digraph", "->", g.vertex_ids(), &g.arc_ids(), notes)
}

/// Graphviz `graph` text for a plain graph: one node line per vertex in
/// stored order, one `--` line per edge in sorted order.
pub fn graph_dot(g: &Graph) -> String {
    graph_dot_annotated(g, &[])
}

/// [`graph_dot`] with note lines rendered as a graph-level label.
pub fn graph_dot_annotated(g: &Graph, notes: &[String]) -> String {
    render("graph", "--", g.vertex_ids(), &g.edge_ids(), notes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_dot_lists_every_vertex_and_edge_once() {
        let dot = graph_dot(&Graph::cycle(4));
        assert!(dot.starts_with("graph {"));
        assert_eq!(dot.matches(" -- ").count(), 4, "C4 has four edges");
        assert_eq!(dot.matches(";\n").count(), 8, "four nodes plus four edges");
    }

    #[test]
    fn oriented_dot_uses_directed_arrows() {
        let g = OGraph::new(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "b".into())],
        )
        .expect("valid arc");
        let dot = ograph_dot(&g);
        assert!(dot.starts_with("digraph {"));
        assert!(dot.contains("\"a\" -> \"b\";"));
        assert!(!dot.contains("--"), "digraphs must not use undirected edges");
    }

    #[test]
    fn quotes_in_ids_are_escaped() {
        let g = Graph::new(vec!["a\"b".into()], vec![]).expect("one vertex");
        assert!(graph_dot(&g).contains("\"a\\\"b\""));
    }

    #[test]
    fn annotations_become_a_top_label() {
        let dot = graph_dot_annotated(&Graph::cycle(3), &["3 vertices".into()]);
        assert!(dot.contains("label=\"3 vertices\";"));
        assert!(dot.contains("labelloc=\"t\";"));
    }
}
