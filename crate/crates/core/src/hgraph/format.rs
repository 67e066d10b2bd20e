//! Line-oriented text formats for instances and forest certificates.
//!
//! Instance file:
//!
//! ```text
//! hmsf 1
//! nodes <N>
//! trees <t>
//! roots <r_0> ... <r_{t-1}>
//! budget <k>            # optional
//! label <id> <name>     # optional, repeatable
//! edge <u> <v> <c_0> ... <c_{t-1}>
//! ```
//!
//! Certificate file: a `tree <i> <root>` line followed by that tree's
//! `fedge <u> <v>` lines, for each tree. `#` starts a comment in both.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{normalize, GraphError, HeteroGraph, Instance, SpanningForest, Tree};
use crate::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: root {root} out of range")]
    RootOutOfRange { line: usize, root: usize },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn malformed(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn num<T: FromStr>(line: usize, token: &str) -> Result<T, FormatError> {
    token
        .parse()
        .map_err(|_| malformed(line, format!("bad number {token:?}")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), FormatError> {
    if slot.replace(value).is_some() {
        return Err(malformed(line, format!("repeated `{key}` line")));
    }
    Ok(())
}

pub fn parse_instance<W: Weight>(text: &str) -> Result<Instance<W>, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, t)) if t == ["hmsf", "1"] => {}
        Some((line, _)) => return Err(malformed(line, "expected `hmsf 1` header")),
        None => return Err(FormatError::Missing("hmsf 1")),
    }

    let mut nodes: Option<usize> = None;
    let mut trees: Option<usize> = None;
    let mut roots: Option<(usize, Vec<usize>)> = None;
    let mut budget: Option<W> = None;
    let mut labels = BTreeMap::new();
    let mut edges = Vec::new();
    let mut seen = HashMap::new();

    for (line, tokens) in lines {
        match tokens[0] {
            "nodes" if tokens.len() == 2 => {
                set_once(&mut nodes, num(line, tokens[1])?, line, "nodes")?
            }
            "trees" if tokens.len() == 2 => {
                set_once(&mut trees, num(line, tokens[1])?, line, "trees")?
            }
            "roots" => {
                let list = tokens[1..]
                    .iter()
                    .map(|t| num(line, t))
                    .collect::<Result<Vec<usize>, _>>()?;
                set_once(&mut roots, (line, list), line, "roots")?;
            }
            "budget" if tokens.len() == 2 => {
                set_once(&mut budget, num(line, tokens[1])?, line, "budget")?
            }
            "label" if tokens.len() == 3 => {
                let id: usize = num(line, tokens[1])?;
                if labels.insert(id, tokens[2].to_string()).is_some() {
                    return Err(malformed(line, format!("node {id} labelled twice")));
                }
            }
            "edge" if tokens.len() >= 3 => {
                let u: usize = num(line, tokens[1])?;
                let v: usize = num(line, tokens[2])?;
                let costs = tokens[3..]
                    .iter()
                    .map(|t| num(line, t))
                    .collect::<Result<Vec<W>, _>>()?;
                if let Some(t) = trees {
                    if costs.len() != t {
                        return Err(malformed(
                            line,
                            format!("edge has {} costs, expected {t}", costs.len()),
                        ));
                    }
                }
                let key = normalize(u, v);
                if seen.insert(key, line).is_some() {
                    return Err(FormatError::DuplicateEdge {
                        line,
                        u: key.0,
                        v: key.1,
                    });
                }
                edges.push((line, u, v, costs));
            }
            other => {
                return Err(malformed(
                    line,
                    format!("unrecognised line starting with {other:?}"),
                ))
            }
        }
    }

    let nodes = nodes.ok_or(FormatError::Missing("nodes"))?;
    let trees = trees.ok_or(FormatError::Missing("trees"))?;
    let (roots_line, roots) = roots.ok_or(FormatError::Missing("roots"))?;
    if let Some(&root) = roots.iter().find(|&&r| r >= nodes) {
        return Err(FormatError::RootOutOfRange {
            line: roots_line,
            root,
        });
    }
    for (line, u, v, costs) in &edges {
        if costs.len() != trees {
            return Err(malformed(
                *line,
                format!("edge has {} costs, expected {trees}", costs.len()),
            ));
        }
        if *u >= nodes || *v >= nodes {
            return Err(malformed(*line, "edge endpoint out of range"));
        }
    }
    let graph = HeteroGraph::from_edges(
        nodes,
        trees,
        edges.into_iter().map(|(_, u, v, c)| (u, v, c)),
    )?
    .with_labels(labels)?;
    Ok(Instance::new(graph, roots, budget)?)
}

pub fn write_instance<W: Weight>(inst: &Instance<W>) -> String {
    write_instance_with_comments(inst, &[])
}

/// Like [`write_instance`], with `# ` comment lines after the header.
pub fn write_instance_with_comments<W: Weight>(inst: &Instance<W>, comments: &[String]) -> String {
    let g = inst.graph();
    let mut out = String::from("hmsf 1\n");
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "nodes {}", g.num_nodes());
    let _ = writeln!(out, "trees {}", g.num_trees());
    let roots: Vec<String> = inst.roots().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "roots {}", roots.join(" "));
    if let Some(k) = inst.budget() {
        let _ = writeln!(out, "budget {k}");
    }
    for (id, name) in g.labels() {
        let _ = writeln!(out, "label {id} {name}");
    }
    for e in g.edges() {
        let _ = write!(out, "edge {} {}", e.u, e.v);
        for c in &e.costs {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_forest(text: &str) -> Result<SpanningForest, FormatError> {
    let mut trees: Vec<(usize, Tree)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens.as_slice() {
            ["tree", i, root] => {
                let i: usize = num(line, i)?;
                if trees.iter().any(|(j, _)| *j == i) {
                    return Err(malformed(line, format!("tree {i} declared twice")));
                }
                trees.push((i, Tree::singleton(num(line, root)?)));
            }
            ["fedge", u, v] => {
                let (_, tree) = trees
                    .last_mut()
                    .ok_or_else(|| malformed(line, "fedge before any tree line"))?;
                let e = normalize(num(line, u)?, num(line, v)?);
                if !tree.edges.insert(e) {
                    return Err(FormatError::DuplicateEdge {
                        line,
                        u: e.0,
                        v: e.1,
                    });
                }
            }
            _ => {
                return Err(malformed(
                    line,
                    "expected `tree <i> <root>` or `fedge <u> <v>`",
                ))
            }
        }
    }
    trees.sort_by_key(|(i, _)| *i);
    if let Some((pos, (i, _))) = trees.iter().enumerate().find(|(pos, (i, _))| pos != i) {
        return Err(malformed(
            0,
            format!("tree indices not contiguous: found {i} at position {pos}"),
        ));
    }
    Ok(SpanningForest::new(
        trees.into_iter().map(|(_, t)| t).collect(),
    ))
}

pub fn write_forest(forest: &SpanningForest) -> String {
    let mut out = String::new();
    for (i, t) in forest.trees.iter().enumerate() {
        let _ = writeln!(out, "tree {i} {}", t.root);
        for (u, v) in &t.edges {
            let _ = writeln!(out, "fedge {u} {v}");
        }
    }
    out
}
