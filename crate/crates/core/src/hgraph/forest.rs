use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{normalize, GraphError, HeteroGraph, Instance};
use crate::Weight;

/// One tree of a forest: its root and its edge set (pairs stored `(min, max)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    pub root: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Tree {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(root: usize, edges: I) -> Self {
        Self {
            root,
            edges: edges.into_iter().map(|(u, v)| normalize(u, v)).collect(),
        }
    }

    pub fn singleton(root: usize) -> Self {
        Self {
            root,
            edges: BTreeSet::new(),
        }
    }

    /// Root plus every edge endpoint.
    pub fn nodes(&self) -> BTreeSet<usize> {
        let mut nodes: BTreeSet<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.insert(self.root);
        nodes
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&normalize(a, b))
    }
}

/// Forest given explicitly per tree; tree `i` is priced by cost function `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningForest {
    pub trees: Vec<Tree>,
}

impl SpanningForest {
    pub fn new(trees: Vec<Tree>) -> Self {
        Self { trees }
    }

    pub fn num_edges(&self) -> usize {
        self.trees.iter().map(|t| t.edges.len()).sum()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.trees.iter().any(|t| t.contains_edge(a, b))
    }

    /// Index of the tree holding `node`, if any.
    pub fn tree_of(&self, node: usize) -> Option<usize> {
        self.trees
            .iter()
            .position(|t| t.root == node || t.edges.iter().any(|&(u, v)| u == node || v == node))
    }
}

/// A single reason a candidate forest is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<W> {
    WrongTreeCount {
        expected: usize,
        found: usize,
    },
    RootMismatch {
        tree: usize,
        expected: usize,
        found: usize,
    },
    NodeOutOfRange {
        tree: usize,
        node: usize,
    },
    SelfLoop {
        tree: usize,
        node: usize,
    },
    EdgeNotInGraph {
        tree: usize,
        u: usize,
        v: usize,
    },
    EdgeInMultipleTrees {
        u: usize,
        v: usize,
    },
    CycleInTree {
        tree: usize,
        u: usize,
        v: usize,
    },
    TreeDisconnected {
        tree: usize,
        node: usize,
    },
    NodeInMultipleTrees {
        node: usize,
    },
    NodeNotSpanned {
        node: usize,
    },
    EdgeCountMismatch {
        expected: usize,
        found: usize,
    },
    CostOverflow,
    CostExceedsBudget {
        cost: W,
        budget: W,
    },
}

impl<W: Weight> Violation<W> {
    /// Short machine-friendly kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::WrongTreeCount { .. } => "wrong tree count",
            Self::RootMismatch { .. } => "root mismatch",
            Self::NodeOutOfRange { .. } => "node out of range",
            Self::SelfLoop { .. } => "self loop",
            Self::EdgeNotInGraph { .. } => "edge not in graph",
            Self::EdgeInMultipleTrees { .. } => "edge in multiple trees",
            Self::CycleInTree { .. } => "cycle in tree",
            Self::TreeDisconnected { .. } => "tree disconnected",
            Self::NodeInMultipleTrees { .. } => "node in multiple trees",
            Self::NodeNotSpanned { .. } => "node not spanned",
            Self::EdgeCountMismatch { .. } => "edge count mismatch",
            Self::CostOverflow => "cost overflow",
            Self::CostExceedsBudget { .. } => "cost exceeds budget",
        }
    }

    fn is_structural(&self) -> bool {
        !matches!(self, Self::CostExceedsBudget { .. } | Self::CostOverflow)
    }
}

impl<W: Weight> fmt::Display for Violation<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.kind())?;
        match self {
            Self::WrongTreeCount { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            Self::RootMismatch {
                tree,
                expected,
                found,
            } => {
                write!(f, "tree {tree} rooted at {found}, expected {expected}")
            }
            Self::NodeOutOfRange { tree, node } => write!(f, "node {node} in tree {tree}"),
            Self::SelfLoop { tree, node } => write!(f, "node {node} in tree {tree}"),
            Self::EdgeNotInGraph { tree, u, v } => write!(f, "({u}, {v}) in tree {tree}"),
            Self::EdgeInMultipleTrees { u, v } => write!(f, "({u}, {v})"),
            Self::CycleInTree { tree, u, v } => {
                write!(f, "tree {tree}, edge ({u}, {v}) closes a cycle")
            }
            Self::TreeDisconnected { tree, node } => {
                write!(f, "node {node} not connected to root of tree {tree}")
            }
            Self::NodeInMultipleTrees { node } => write!(f, "node {node}"),
            Self::NodeNotSpanned { node } => write!(f, "node {node}"),
            Self::EdgeCountMismatch { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            Self::CostOverflow => write!(f, "forest cost does not fit the cost type"),
            Self::CostExceedsBudget { cost, budget } => write!(f, "{cost} > {budget}"),
        }
    }
}

/// Outcome of [`verify_forest`]. `cost` is present whenever the forest is
/// structurally sound, even if it breaks the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport<W> {
    pub valid: bool,
    pub cost: Option<W>,
    pub violations: Vec<Violation<W>>,
}

impl<W: Weight> VerificationReport<W> {
    pub fn has(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl<W: Weight> fmt::Display for VerificationReport<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "valid={}", self.valid)?;
        if let Some(c) = self.cost {
            write!(f, " cost={c}")?;
        }
        write!(f, " violations={}", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\nviolation: {v}")?;
        }
        Ok(())
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn structural_violations<W: Weight>(
    g: &HeteroGraph<W>,
    forest: &SpanningForest,
    roots: Option<&[usize]>,
) -> Vec<Violation<W>> {
    let n = g.num_nodes();
    let mut out = Vec::new();
    if forest.trees.len() != g.num_trees() {
        out.push(Violation::WrongTreeCount {
            expected: g.num_trees(),
            found: forest.trees.len(),
        });
    }

    let mut membership = vec![0usize; n];
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();

    for (ti, tree) in forest.trees.iter().enumerate() {
        if let Some(expected) = roots.and_then(|r| r.get(ti)) {
            if *expected != tree.root {
                out.push(Violation::RootMismatch {
                    tree: ti,
                    expected: *expected,
                    found: tree.root,
                });
            }
        }
        if tree.root >= n {
            out.push(Violation::NodeOutOfRange {
                tree: ti,
                node: tree.root,
            });
        }

        let mut dsu = DisjointSet::new(n);
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(u, v) in &tree.edges {
            if let Some(&node) = [u, v].iter().find(|&&x| x >= n) {
                out.push(Violation::NodeOutOfRange { tree: ti, node });
                continue;
            }
            if u == v {
                out.push(Violation::SelfLoop { tree: ti, node: u });
                continue;
            }
            if !g.has_edge(u, v) {
                out.push(Violation::EdgeNotInGraph { tree: ti, u, v });
            }
            if edge_owner.insert((u, v), ti).is_some() {
                out.push(Violation::EdgeInMultipleTrees { u, v });
            }
            if !dsu.union(u, v) {
                out.push(Violation::CycleInTree { tree: ti, u, v });
            }
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }

        let nodes: BTreeSet<usize> = tree.nodes().into_iter().filter(|&x| x < n).collect();
        if tree.root < n {
            let mut reached = BTreeSet::from([tree.root]);
            let mut stack = vec![tree.root];
            while let Some(x) = stack.pop() {
                for &y in adj.get(&x).into_iter().flatten() {
                    if reached.insert(y) {
                        stack.push(y);
                    }
                }
            }
            for &x in nodes.difference(&reached) {
                out.push(Violation::TreeDisconnected { tree: ti, node: x });
            }
        }
        for x in nodes {
            membership[x] += 1;
        }
    }

    for (node, &count) in membership.iter().enumerate() {
        match count {
            0 => out.push(Violation::NodeNotSpanned { node }),
            1 => {}
            _ => out.push(Violation::NodeInMultipleTrees { node }),
        }
    }
    let expected = n.saturating_sub(g.num_trees());
    if forest.num_edges() != expected {
        out.push(Violation::EdgeCountMismatch {
            expected,
            found: forest.num_edges(),
        });
    }
    out
}

/// Sum of tree costs, assuming a structurally checked forest.
fn priced<W: Weight>(g: &HeteroGraph<W>, forest: &SpanningForest) -> Option<W> {
    W::checked_sum(forest.trees.iter().enumerate().flat_map(|(ti, t)| {
        t.edges
            .iter()
            .map(move |&(u, v)| g.cost(u, v, ti).expect("edge checked"))
    }))
}

/// Cost of a spanning forest: tree `i`'s edges are priced by cost index `i`.
pub fn forest_cost<W: Weight>(
    g: &HeteroGraph<W>,
    forest: &SpanningForest,
) -> Result<W, GraphError> {
    let violations = structural_violations(g, forest, None);
    if let Some(v) = violations.first() {
        return Err(GraphError::InvalidForest(v.to_string()));
    }
    priced(g, forest).ok_or(GraphError::CostOverflow(0))
}

/// Polynomial-time certificate check for the decision form: the forest must
/// partition the nodes into trees rooted at the instance roots, use only
/// graph edges, and (with a budget) cost at most the budget. Every
/// violation found is reported.
pub fn verify_forest<W: Weight>(
    inst: &Instance<W>,
    forest: &SpanningForest,
) -> VerificationReport<W> {
    let mut violations = structural_violations(inst.graph(), forest, Some(inst.roots()));
    let mut cost = None;
    if violations.iter().all(|v| !v.is_structural()) {
        match priced(inst.graph(), forest) {
            Some(c) => {
                cost = Some(c);
                if let Some(budget) = inst.budget() {
                    if c > budget {
                        violations.push(Violation::CostExceedsBudget { cost: c, budget });
                    }
                }
            }
            None => violations.push(Violation::CostOverflow),
        }
    }
    VerificationReport {
        valid: violations.is_empty(),
        cost,
        violations,
    }
}
