//! Exhaustive edge-subset oracle for tiny instances.

use std::collections::HashSet;

use itertools::Itertools;

use super::{partition_code, SolveResult, SolverError};
use crate::hgraph::{verify_forest, Instance, SpanningForest, Tree};
use crate::Weight;

pub const BRUTE_FORCE_MAX_NODES: usize = 9;
pub const BRUTE_FORCE_MAX_EDGES: usize = 18;

/// Splits an edge subset into trees grown from each root. Edges no root
/// reaches are dumped into tree 0 so the verifier rejects the subset.
fn grow_trees<W: Weight>(inst: &Instance<W>, subset: &[(usize, usize)]) -> SpanningForest {
    let mut unused: Vec<(usize, usize)> = subset.to_vec();
    let mut trees: Vec<Tree> = Vec::with_capacity(inst.roots().len());
    for &root in inst.roots() {
        let mut tree = Tree::singleton(root);
        let mut frontier = vec![root];
        while let Some(x) = frontier.pop() {
            let (touching, rest): (Vec<_>, Vec<_>) =
                unused.into_iter().partition(|&(u, v)| u == x || v == x);
            unused = rest;
            for (u, v) in touching {
                tree.edges.insert((u, v));
                frontier.push(if u == x { v } else { u });
            }
        }
        trees.push(tree);
    }
    if let Some(first) = trees.first_mut() {
        first.edges.extend(unused);
    }
    SpanningForest::new(trees)
}

/// Exhaustive search over every edge subset of size `num_nodes - num_trees`,
/// keeping those [`verify_forest`] accepts. Shares the tie-break of
/// [`super::solve_exact`] (smallest partition code, then lexicographically
/// smallest edge lists) so the two results are directly comparable.
pub fn brute_force_enum<W: Weight>(inst: &Instance<W>) -> Result<SolveResult<W>, SolverError> {
    let g = inst.graph();
    if g.num_nodes() > BRUTE_FORCE_MAX_NODES || g.num_edges() > BRUTE_FORCE_MAX_EDGES {
        return Err(SolverError::TooLarge(format!(
            "{} nodes / {} edges exceed the brute-force bound of {BRUTE_FORCE_MAX_NODES} / {BRUTE_FORCE_MAX_EDGES}",
            g.num_nodes(),
            g.num_edges()
        )));
    }
    let unbudgeted = inst.clone().with_budget(None);
    let need = g.num_nodes() - g.num_trees();
    let all_edges: Vec<(usize, usize)> = g.edges().iter().map(|e| e.endpoints()).collect();

    let mut feasible = HashSet::new();
    type Key<W> = (W, u64, Vec<Vec<(usize, usize)>>);
    let mut best: Option<(Key<W>, SpanningForest)> = None;
    for subset in all_edges.into_iter().combinations(need) {
        let forest = grow_trees(&unbudgeted, &subset);
        let report = verify_forest(&unbudgeted, &forest);
        if !report.valid {
            continue;
        }
        let cost = report.cost.expect("valid report carries a cost");
        let code = partition_code(&unbudgeted, &forest).expect("valid forest spans every node");
        feasible.insert(code);
        let lists = forest
            .trees
            .iter()
            .map(|t| t.edges.iter().copied().collect())
            .collect();
        let key = (cost, code, lists);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, forest));
        }
    }
    let ((min_cost, _, _), forest) = best.ok_or(SolverError::NoSpanningForest)?;
    Ok(SolveResult {
        min_cost,
        forest,
        feasible_partitions: feasible.len() as u64,
    })
}
