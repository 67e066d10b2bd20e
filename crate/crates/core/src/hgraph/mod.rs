//! Heterogeneous graphs: undirected graphs whose edges carry one cost per
//! tree of the forest being built.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::Weight;

pub mod dot;
mod forest;
pub mod format;
mod metric;

pub use forest::{forest_cost, verify_forest, SpanningForest, Tree, VerificationReport, Violation};
pub use metric::{
    check_triangle_inequality, is_complete, metric_closure_complete, shortest_distances,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one tree")]
    NoTrees,
    #[error("node {node} out of range for {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) carries {found} costs, expected {expected}")]
    CostArity {
        u: usize,
        v: usize,
        expected: usize,
        found: usize,
    },
    #[error("sum of costs under index {0} overflows the cost type")]
    CostOverflow(usize),
    #[error("expected {expected} roots, got {found}")]
    RootCount { expected: usize, found: usize },
    #[error("root {root} out of range")]
    RootOutOfRange { root: usize },
    #[error("root {0} listed twice")]
    DuplicateRoot(usize),
    #[error("label {0:?} is not a single non-empty token")]
    BadLabel(String),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("graph is not complete")]
    GraphNotComplete,
    #[error("graph is disconnected: no path between {0} and {1}")]
    DisconnectedGraph(usize, usize),
    #[error("tree index {index} out of range for {num_trees} trees")]
    TreeIndexOutOfRange { index: usize, num_trees: usize },
}

/// An undirected edge with `u < v` and one cost per tree index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge<W> {
    pub u: usize,
    pub v: usize,
    pub costs: Vec<W>,
}

impl<W: Weight> Edge<W> {
    pub fn cost(&self, tree: usize) -> W {
        self.costs[tree]
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// Orders an endpoint pair as `(min, max)`.
pub fn normalize(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Immutable heterogeneous graph. Edges are kept sorted by `(u, v)`.
#[derive(Debug, Clone)]
pub struct HeteroGraph<W = crate::Cost> {
    num_nodes: usize,
    num_trees: usize,
    labels: BTreeMap<usize, String>,
    edges: Vec<Edge<W>>,
    index: HashMap<(usize, usize), usize>,
}

impl<W: PartialEq> PartialEq for HeteroGraph<W> {
    fn eq(&self, other: &Self) -> bool {
        self.num_nodes == other.num_nodes
            && self.num_trees == other.num_trees
            && self.labels == other.labels
            && self.edges == other.edges
    }
}

impl<W: Eq> Eq for HeteroGraph<W> {}

impl<W: Weight> HeteroGraph<W> {
    /// Validates and builds a graph. Endpoint order of the input does not
    /// matter; the per-index cost sums must fit in `W`.
    pub fn from_edges<I>(num_nodes: usize, num_trees: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Vec<W>)>,
    {
        if num_trees == 0 {
            return Err(GraphError::NoTrees);
        }
        let mut list = Vec::new();
        let mut seen = HashMap::new();
        for (a, b, costs) in edges {
            for node in [a, b] {
                if node >= num_nodes {
                    return Err(GraphError::NodeOutOfRange { node, num_nodes });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = normalize(a, b);
            if costs.len() != num_trees {
                return Err(GraphError::CostArity {
                    u,
                    v,
                    expected: num_trees,
                    found: costs.len(),
                });
            }
            if seen.insert((u, v), ()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            list.push(Edge { u, v, costs });
        }
        for i in 0..num_trees {
            W::checked_sum(list.iter().map(|e| e.costs[i])).ok_or(GraphError::CostOverflow(i))?;
        }
        list.sort_by_key(|e| (e.u, e.v));
        let index = list
            .iter()
            .enumerate()
            .map(|(k, e)| ((e.u, e.v), k))
            .collect();
        Ok(Self {
            num_nodes,
            num_trees,
            labels: BTreeMap::new(),
            edges: list,
            index,
        })
    }

    /// Attaches display names. Names must be single whitespace-free tokens.
    pub fn with_labels<I, S>(mut self, labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, S)>,
        S: Into<String>,
    {
        for (node, name) in labels {
            let name = name.into();
            if node >= self.num_nodes {
                return Err(GraphError::NodeOutOfRange {
                    node,
                    num_nodes: self.num_nodes,
                });
            }
            if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('#') {
                return Err(GraphError::BadLabel(name));
            }
            self.labels.insert(node, name);
        }
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_trees(&self) -> usize {
        self.num_trees
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge<W>> {
        self.index.get(&normalize(a, b)).map(|&k| &self.edges[k])
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.index.contains_key(&normalize(a, b))
    }

    /// Cost of edge `{a, b}` under `tree`'s cost function.
    pub fn cost(&self, a: usize, b: usize, tree: usize) -> Option<W> {
        self.edge(a, b).map(|e| e.costs[tree])
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels.get(&node).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_name(&self, node: usize) -> String {
        self.label(node)
            .map_or_else(|| node.to_string(), str::to_string)
    }

    pub fn node_by_label(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == name)
            .map(|(&n, _)| n)
    }

    /// Adjacency lists, neighbours in increasing order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub(crate) fn check_tree_index(&self, index: usize) -> Result<(), GraphError> {
        if index < self.num_trees {
            Ok(())
        } else {
            Err(GraphError::TreeIndexOutOfRange {
                index,
                num_trees: self.num_trees,
            })
        }
    }
}

/// A graph together with one root per tree and an optional budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<W = crate::Cost> {
    graph: HeteroGraph<W>,
    roots: Vec<usize>,
    budget: Option<W>,
}

impl<W: Weight> Instance<W> {
    pub fn new(
        graph: HeteroGraph<W>,
        roots: Vec<usize>,
        budget: Option<W>,
    ) -> Result<Self, GraphError> {
        if roots.len() != graph.num_trees() {
            return Err(GraphError::RootCount {
                expected: graph.num_trees(),
                found: roots.len(),
            });
        }
        for (i, &r) in roots.iter().enumerate() {
            if r >= graph.num_nodes() {
                return Err(GraphError::RootOutOfRange { root: r });
            }
            if roots[..i].contains(&r) {
                return Err(GraphError::DuplicateRoot(r));
            }
        }
        Ok(Self {
            graph,
            roots,
            budget,
        })
    }

    pub fn graph(&self) -> &HeteroGraph<W> {
        &self.graph
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn budget(&self) -> Option<W> {
        self.budget
    }

    pub fn with_budget(mut self, budget: Option<W>) -> Self {
        self.budget = budget;
        self
    }

    /// Same instance over a different graph (roots and budget kept).
    pub fn with_graph(&self, graph: HeteroGraph<W>) -> Result<Self, GraphError> {
        Self::new(graph, self.roots.clone(), self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_normalizes() {
        let g = HeteroGraph::<u64>::from_edges(3, 2, vec![(2, 0, vec![1, 2]), (0, 1, vec![3, 4])])
            .unwrap();
        assert_eq!(g.edges()[0].endpoints(), (0, 1));
        assert_eq!(g.edges()[1].endpoints(), (0, 2));
        assert_eq!(g.cost(2, 0, 1), Some(2));
        assert_eq!(g.cost(1, 2, 0), None);
        assert_eq!(g.adjacency()[0], vec![1, 2]);
    }

    #[test]
    fn rejects_bad_edges() {
        let e = |u, v| (u, v, vec![1u64, 1]);
        assert_eq!(
            HeteroGraph::from_edges(2, 2, vec![e(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            HeteroGraph::from_edges(2, 2, vec![e(0, 1), e(1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            HeteroGraph::from_edges(2, 2, vec![e(0, 2)]),
            Err(GraphError::NodeOutOfRange { .. })
        ));
        assert!(matches!(
            HeteroGraph::from_edges(2, 2, vec![(0, 1, vec![1u64])]),
            Err(GraphError::CostArity { .. })
        ));
        assert_eq!(
            HeteroGraph::<u64>::from_edges(2, 0, vec![]),
            Err(GraphError::NoTrees)
        );
    }

    #[test]
    fn overflow_guard() {
        let edges = vec![(0, 1, vec![200u8, 1]), (1, 2, vec![56, 1])];
        assert_eq!(
            HeteroGraph::from_edges(3, 2, edges),
            Err(GraphError::CostOverflow(0))
        );
        let edges = vec![(0, 1, vec![200u8, 1]), (1, 2, vec![55, 1])];
        assert!(HeteroGraph::from_edges(3, 2, edges).is_ok());
    }

    #[test]
    fn instance_roots() {
        let g = HeteroGraph::<u64>::from_edges(3, 2, vec![(0, 1, vec![1, 1])]).unwrap();
        assert!(Instance::new(g.clone(), vec![0, 1], None).is_ok());
        assert_eq!(
            Instance::new(g.clone(), vec![0, 0], None),
            Err(GraphError::DuplicateRoot(0))
        );
        assert_eq!(
            Instance::new(g.clone(), vec![0, 3], None),
            Err(GraphError::RootOutOfRange { root: 3 })
        );
        assert_eq!(
            Instance::new(g, vec![0], None),
            Err(GraphError::RootCount {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn labels() {
        let g = HeteroGraph::<u64>::from_edges(2, 1, vec![(0, 1, vec![1])]).unwrap();
        let g = g.with_labels([(0, "t")]).unwrap();
        assert_eq!(g.display_name(0), "t");
        assert_eq!(g.display_name(1), "1");
        assert_eq!(g.node_by_label("t"), Some(0));
        assert!(g.clone().with_labels([(1, "a b")]).is_err());
    }
}
