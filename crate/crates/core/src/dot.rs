//! DOT rendering for evolution, branchial, causal, token-event, and
//! glocal branchial graphs, following the usual figure conventions:
//! evolution edges gray, causal edges orange and tagged `kind="causal"`,
//! token ingestion/egestion edges tagged `kind="token"`, branchial edges
//! dashed. Node ordering is deterministic (ids ascend, keys label nodes).

use std::fmt::Write as _;

use crate::category::FreeCategory;
use crate::multiway::{
    BranchialGraph, CausalGraph, GlocalBranchialGraph, GlocalEdgeKind, MultiwayGraph,
    TokenEventGraph,
};

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn evolution_dot(graph: &MultiwayGraph) -> String {
    let mut out = String::from("digraph evolution {\n  rankdir=TB;\n");
    for state in &graph.states {
        let _ = writeln!(
            out,
            "  s{} [label=\"{}\", layer=\"{}\"];",
            state.id,
            escape(&state.key),
            state.layer
        );
    }
    for event in &graph.events {
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{}\", color=\"gray\"];",
            event.from,
            event.to,
            escape(&event.label)
        );
    }
    out.push_str("}\n");
    out
}

pub fn branchial_dot(graph: &BranchialGraph) -> String {
    let mut out = format!("graph branchial_t{} {{\n", graph.layer);
    for &vertex in &graph.vertices {
        let _ = writeln!(out, "  s{vertex};");
    }
    for &(a, b) in &graph.edges {
        let _ = writeln!(out, "  s{a} -- s{b} [style=\"dashed\"];");
    }
    out.push_str("}\n");
    out
}

pub fn causal_dot(graph: &CausalGraph) -> String {
    let mut out = String::from("digraph causal {\n");
    for (id, label, layer) in &graph.events {
        let _ = writeln!(
            out,
            "  e{} [label=\"{}\", layer=\"{}\", shape=box];",
            id,
            escape(label),
            layer
        );
    }
    for &(from, to) in &graph.edges {
        let _ = writeln!(
            out,
            "  e{from} -> e{to} [kind=\"causal\", color=\"orange\", label=\"causal\"];"
        );
    }
    out.push_str("}\n");
    out
}

pub fn token_event_dot(graph: &TokenEventGraph) -> String {
    let mut out = String::from("digraph glocal {\n");
    for token in &graph.tokens {
        let _ = writeln!(
            out,
            "  t{} [label=\"{}\", shape=ellipse];",
            token.id,
            escape(&token.value)
        );
    }
    for event in &graph.events {
        let _ = writeln!(
            out,
            "  e{} [label=\"{}\", shape=box];",
            event.id,
            escape(&event.label)
        );
    }
    for event in &graph.events {
        for &token in &event.consumed {
            let _ = writeln!(
                out,
                "  t{} -> e{} [kind=\"token\", color=\"gray\"];",
                token, event.id
            );
        }
        for &token in &event.produced {
            let _ = writeln!(
                out,
                "  e{} -> t{} [kind=\"token\", color=\"gray\"];",
                event.id, token
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn glocal_branchial_dot(graph: &GlocalBranchialGraph) -> String {
    let mut out = format!("graph glocal_branchial_t{} {{\n", graph.layer);
    for &vertex in &graph.vertices {
        let _ = writeln!(out, "  t{vertex};");
    }
    for &(a, b, kind) in &graph.edges {
        let style = match kind {
            GlocalEdgeKind::Spatial => "solid",
            GlocalEdgeKind::Branchial => "dashed",
        };
        let kind_name = match kind {
            GlocalEdgeKind::Spatial => "spatial",
            GlocalEdgeKind::Branchial => "branchial",
        };
        let _ = writeln!(
            out,
            "  t{a} -- t{b} [style=\"{style}\", kind=\"{kind_name}\"];"
        );
    }
    out.push_str("}\n");
    out
}

/// Morphisms rendered with step counts and traces as edge labels;
/// identities are omitted from the drawing.
pub fn category_dot(fc: &FreeCategory) -> String {
    let mut out = String::from("digraph category {\n");
    for (index, object) in fc.objects.iter().enumerate() {
        let _ = writeln!(
            out,
            "  o{} [label=\"{}\", time=\"{}\"];",
            index,
            escape(&object.name),
            object.time
        );
    }
    for m in fc.non_identities() {
        let trace: Vec<String> = m.trace.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(
            out,
            "  o{} -> o{} [label=\"{} [{}]\"];",
            m.source,
            m.target,
            m.steps,
            trace.join(",")
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiway::{build_multiway, DedupMode, GraphSystem};

    #[test]
    fn empty_graph_renders_header_only() {
        let system = GraphSystem::new(&[]);
        let graph =
            build_multiway(&system, &["a".to_string()], 0, DedupMode::PerLayer, None).unwrap();
        let dot = evolution_dot(&graph);
        assert!(dot.starts_with("digraph evolution {"));
        assert!(dot.ends_with("}\n"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn path_graph_renders_chain() {
        let system = GraphSystem::new(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]);
        let graph =
            build_multiway(&system, &["a".to_string()], 4, DedupMode::PerLayer, None).unwrap();
        let dot = evolution_dot(&graph);
        assert_eq!(dot.matches("label=").count(), 9, "5 nodes + 4 edges");
        assert_eq!(dot.matches("->").count(), 4);
    }

    #[test]
    fn quotes_in_labels_are_escaped() {
        let system = GraphSystem::new(&[(r#"a"x"#, "b")]);
        let graph = build_multiway(
            &system,
            &[r#"a"x"#.to_string()],
            1,
            DedupMode::PerLayer,
            None,
        )
        .unwrap();
        let dot = evolution_dot(&graph);
        assert!(dot.contains(r#"a\"x"#));
    }
}
