use std::fmt::Write;

use assur_core::AssurScheme;

/// Graphviz digraph of a scheme: one node per component, one arc per cover
/// pair, pointing from the lower component to the one resting on it.
pub fn scheme_to_dot(s: &AssurScheme) -> String {
    let mut out = String::from("digraph assur_scheme {\n    rankdir=BT;\n    node [shape=box];\n");
    for (i, c) in s.components.iter().enumerate() {
        let _ = writeln!(
            out,
            "    c{i} [label=\"C{i} (level {})\\ninner: {}\\npins: {}\"];",
            c.level,
            escape(&c.inner.join(", ")),
            escape(&c.pins.join(", ")),
        );
    }
    for &(a, b) in &s.covers {
        let _ = writeln!(out, "    c{a} -> c{b};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
