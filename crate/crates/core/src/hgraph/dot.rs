//! Graphviz export.

use std::fmt::Write as _;

use super::{Edge, HeteroGraph};
use crate::Weight;

/// Line style of one edge statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStyle {
    Dashed,
    Thin,
    Bold,
    Dotted,
    Plain,
}

impl EdgeStyle {
    fn attrs(self) -> &'static str {
        match self {
            EdgeStyle::Dashed => "style=dashed",
            EdgeStyle::Thin => "style=solid, penwidth=1",
            EdgeStyle::Bold => "style=bold, penwidth=3",
            EdgeStyle::Dotted => "style=dotted, color=gray50",
            EdgeStyle::Plain => "style=solid",
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` as an undirected DOT graph with one `--` statement per edge,
/// each labelled with its cost tuple.
pub fn to_dot<W: Weight>(g: &HeteroGraph<W>, style: impl Fn(&Edge<W>) -> EdgeStyle) -> String {
    let mut out = String::from("graph hmsf {\n  node [shape=circle];\n");
    for v in 0..g.num_nodes() {
        let _ = writeln!(out, "  n{v} [label={}];", quote(&g.display_name(v)));
    }
    for e in g.edges() {
        let costs: Vec<String> = e.costs.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "  n{} -- n{} [{}, label={}];",
            e.u,
            e.v,
            style(e).attrs(),
            quote(&format!("({})", costs.join(",")))
        );
    }
    out.push_str("}\n");
    out
}
