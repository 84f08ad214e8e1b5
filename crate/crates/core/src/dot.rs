//! Graphviz export of a configuration: nodes labeled by identifier, edges of
//! `M` drawn bold, one blue arc per non-null pointer `p`.

use std::fmt::Write;

use crate::graph::Graph;
use crate::rules::Configuration;

pub fn export_dot(g: &Graph, c: &Configuration) -> String {
    let mut out = String::from("digraph mplus {\n");
    for v in g.nodes_by_identifier() {
        let id = g.ident(v);
        let shape = if g.is_single(v) {
            "circle"
        } else {
            "doublecircle"
        };
        writeln!(out, "  n{id} [label=\"{id}\", shape={shape}];").unwrap();
    }
    let mut edges: Vec<(u64, u64, bool)> = g
        .edges()
        .iter()
        .map(|&e| {
            let (a, b) = g.edge_identifiers(e);
            let (x, _) = e.endpoints();
            let matched = g.mate(x).is_some_and(|m| e.contains(m));
            (a.0, b.0, matched)
        })
        .collect();
    edges.sort_unstable();
    for (a, b, matched) in edges {
        if matched {
            writeln!(out, "  n{a} -> n{b} [dir=none, style=bold, penwidth=3];").unwrap();
        } else {
            writeln!(out, "  n{a} -> n{b} [dir=none];").unwrap();
        }
    }
    let mut arcs: Vec<(u64, u64)> = g
        .nodes()
        .filter_map(|v| c.p(v).map(|w| (g.ident(v).0, g.ident(w).0)))
        .collect();
    arcs.sort_unstable();
    for (a, b) in arcs {
        writeln!(out, "  n{a} -> n{b} [color=blue, constraint=false];").unwrap();
    }
    out.push_str("}\n");
    out
}
