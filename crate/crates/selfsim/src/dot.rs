//! Graphviz export. Nodes and edges are emitted in index order.

use std::fmt::Write as _;

use crate::action::SelfSimilarAction;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The graph, with arrows drawn from source to range.
pub fn graph_dot(a: &SelfSimilarAction) -> String {
    let g = &a.graph;
    let mut s = String::from("digraph E {\n");
    for v in g.vertex_names() {
        let _ = writeln!(s, "  {};", quote(v));
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            quote(g.vertex_name(e.src)),
            quote(g.vertex_name(e.rng)),
            quote(&e.name)
        );
    }
    s.push_str("}\n");
    s
}

fn node_line(a: &SelfSimilarAction, s: &mut String, g: usize) {
    let shape = if a.model.is_unit(g) { "doublecircle" } else { "circle" };
    let _ = writeln!(s, "  {} [shape={shape}];", quote(a.model.name(g)));
}

/// Arrows `g -(e/ge)-> g|_e` over every element and every edge it acts on.
pub fn restriction_dot(a: &SelfSimilarAction) -> String {
    let mut s = String::from("digraph restriction {\n");
    for g in 0..a.model.len() {
        node_line(a, &mut s, g);
    }
    for g in 0..a.model.len() {
        for &e in a.graph.incoming(a.model.src(g)) {
            let label = format!("{}/{}", a.graph.edge_name(e), a.graph.edge_name(a.edge_act(g, e)));
            let _ = writeln!(
                s,
                "  {} -> {} [label={}];",
                quote(a.model.name(g)),
                quote(a.model.name(a.edge_res(g, e))),
                quote(&label)
            );
        }
    }
    s.push_str("}\n");
    s
}

/// The fixing automaton of `g`.
pub fn fixing_dot(a: &SelfSimilarAction, g: usize) -> String {
    let fa = a.fixing_automaton(g);
    let mut s = format!("digraph {} {{\n", quote(&format!("fixing_{}", a.model.name(g))));
    for &h in &fa.nodes {
        node_line(a, &mut s, h);
    }
    for &(h, e, k) in &fa.transitions {
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            quote(a.model.name(h)),
            quote(a.model.name(k)),
            quote(a.graph.edge_name(e))
        );
    }
    s.push_str("}\n");
    s
}
