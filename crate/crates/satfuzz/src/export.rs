//! DOT rendering of the circuit graph and a plain-text value dump.

use std::fmt::Write as _;

use satfuzz_core::{CircuitGraph, InputPattern, NodeKind, SimError};

pub fn to_dot(graph: &CircuitGraph) -> String {
    let mut out = String::new();
    let title = if graph.name.is_empty() { "circuit" } else { graph.name.as_str() };
    let _ = writeln!(out, "digraph \"{}\" {{\n  rankdir=LR;", escape(title));
    for id in graph.node_ids() {
        let node = graph.node(id);
        let shape = match node.kind {
            NodeKind::Input => "invtriangle",
            NodeKind::Const(_) => "plaintext",
            NodeKind::Gate(_) if graph.primary_outputs.contains(&id) => "doublecircle",
            NodeKind::Gate(_) => "box",
        };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\n{}\", shape={shape}];",
            id.0,
            escape(&node.name),
            node.kind.label()
        );
    }
    for id in graph.node_ids() {
        for f in &graph.node(id).fanin {
            let _ = writeln!(out, "  n{} -> n{};", f.0, id.0);
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `pattern <i> <bits>` followed by one `name=value` line per node.
pub fn value_dump(graph: &CircuitGraph, patterns: &[InputPattern]) -> Result<String, SimError> {
    let mut out = String::new();
    for (i, p) in patterns.iter().enumerate() {
        let v = satfuzz_core::simulate(graph, p)?;
        let _ = writeln!(out, "pattern {i} {p}");
        for id in graph.node_ids() {
            let _ = writeln!(out, "{}={}", graph.node(id).name, v.get(id) as u8);
        }
    }
    Ok(out)
}
