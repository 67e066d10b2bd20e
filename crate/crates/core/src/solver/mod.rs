//! Exact HMSF optimisation.
//!
//! For a fixed assignment of nodes to trees the trees are independent: tree
//! `i` is just a minimum spanning tree of its node set under cost index `i`.
//! [`solve_exact`] therefore enumerates every assignment of the non-root
//! nodes (roots pinned to their own tree) and prices each feasible one with
//! per-side MSTs. Partitions are encoded as base-`t` numbers with the
//! lowest-id free node as the most significant digit; ties go to the
//! smallest code, and the returned trees are the lexicographically smallest
//! MSTs, so results do not depend on scheduling.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::hgraph::{GraphError, HeteroGraph, Instance, SpanningForest, Tree};
use crate::Weight;

mod brute;

pub use brute::{brute_force_enum, BRUTE_FORCE_MAX_EDGES, BRUTE_FORCE_MAX_NODES};

/// Default bound on `num_nodes - num_trees`.
pub const DEFAULT_MAX_FREE_NODES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("no spanning forest exists")]
    NoSpanningForest,
    #[error("instance has no budget")]
    MissingBudget,
    #[error("cost sums overflow the cost type")]
    Overflow,
    #[error("empty node set")]
    EmptyNodeSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Price every feasible partition.
    Enumerate,
    /// Skip pricing partitions whose lower bound cannot beat the incumbent.
    /// Returns exactly what [`Strategy::Enumerate`] returns.
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Enumeration is refused when `num_trees^(num_nodes - num_trees)`
    /// exceeds `2^max_free_nodes`.
    pub max_free_nodes: usize,
    pub strategy: Strategy,
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_free_nodes: DEFAULT_MAX_FREE_NODES,
            strategy: Strategy::Enumerate,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult<W> {
    pub min_cost: W,
    pub forest: SpanningForest,
    /// Number of node partitions in which every tree's side is connected.
    pub feasible_partitions: u64,
}

/// Result of [`mst`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mst<W> {
    Spanning { edges: Vec<(usize, usize)>, cost: W },
    Disconnected,
}

/// Minimum spanning tree of the subgraph induced by `nodes` under cost index
/// `tree`. Among equal-cost trees the one with the lexicographically
/// smallest sorted edge list is returned (Kruskal over `(cost, u, v)`).
pub fn mst<W: Weight>(
    g: &HeteroGraph<W>,
    nodes: &BTreeSet<usize>,
    tree: usize,
) -> Result<Mst<W>, SolverError> {
    g.check_tree_index(tree)?;
    if nodes.is_empty() {
        return Err(SolverError::EmptyNodeSet);
    }
    if let Some(&node) = nodes.iter().find(|&&v| v >= g.num_nodes()) {
        return Err(GraphError::NodeOutOfRange {
            node,
            num_nodes: g.num_nodes(),
        }
        .into());
    }
    let mut candidates: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| nodes.contains(&e.u) && nodes.contains(&e.v))
        .collect();
    candidates.sort_by_key(|e| (e.costs[tree], e.u, e.v));

    let mut parent: Vec<usize> = (0..g.num_nodes()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = Vec::with_capacity(nodes.len() - 1);
    let mut cost = W::zero();
    for e in candidates {
        let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if ru != rv {
            parent[ru] = rv;
            edges.push((e.u, e.v));
            cost = cost
                .checked_add(&e.costs[tree])
                .ok_or(SolverError::Overflow)?;
            if edges.len() + 1 == nodes.len() {
                break;
            }
        }
    }
    if edges.len() + 1 != nodes.len() {
        return Ok(Mst::Disconnected);
    }
    edges.sort_unstable();
    Ok(Mst::Spanning { edges, cost })
}

/// Dense view of a small graph used inside the enumeration loop.
struct Dense<W> {
    n: usize,
    trees: usize,
    adj: Vec<u64>,
    /// `weights[i][u * n + v]`
    weights: Vec<Vec<W>>,
    /// Cheapest incident edge per tree index and node.
    min_incident: Vec<Vec<W>>,
    roots: Vec<usize>,
    free: Vec<usize>,
}

impl<W: Weight> Dense<W> {
    fn new(inst: &Instance<W>) -> Self {
        let g = inst.graph();
        let n = g.num_nodes();
        let trees = g.num_trees();
        let mut adj = vec![0u64; n];
        let mut weights = vec![vec![W::zero(); n * n]; trees];
        let mut min_incident = vec![vec![W::max_value(); n]; trees];
        for e in g.edges() {
            adj[e.u] |= 1 << e.v;
            adj[e.v] |= 1 << e.u;
            for i in 0..trees {
                let w = e.costs[i];
                weights[i][e.u * n + e.v] = w;
                weights[i][e.v * n + e.u] = w;
                for x in [e.u, e.v] {
                    min_incident[i][x] = min_incident[i][x].min(w);
                }
            }
        }
        let roots = inst.roots().to_vec();
        let free = (0..n).filter(|v| !roots.contains(v)).collect();
        Self {
            n,
            trees,
            adj,
            weights,
            min_incident,
            roots,
            free,
        }
    }

    /// Node mask per tree for partition `code`.
    fn decode(&self, mut code: u64, sides: &mut [u64]) {
        for (i, side) in sides.iter_mut().enumerate() {
            *side = 1 << self.roots[i];
        }
        let t = self.trees as u64;
        for &v in self.free.iter().rev() {
            sides[(code % t) as usize] |= 1 << v;
            code /= t;
        }
    }

    fn connected(&self, mask: u64, root: usize) -> bool {
        let mut reached = 1u64 << root;
        let mut frontier = reached;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & mask & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        reached == mask
    }

    /// Sum over non-root members of their cheapest incident edge.
    fn lower_bound(&self, sides: &[u64]) -> W {
        let mut total = W::zero();
        for (i, &side) in sides.iter().enumerate() {
            let mut rest = side & !(1u64 << self.roots[i]);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                total = total
                    .checked_add(&self.min_incident[i][v])
                    .unwrap_or_else(W::max_value);
            }
        }
        total
    }

    /// Prim's algorithm on a connected side.
    fn side_cost(&self, mask: u64, tree: usize) -> W {
        let w = &self.weights[tree];
        let mut nodes = [0usize; 64];
        let mut s = 0;
        let mut rest = mask;
        while rest != 0 {
            nodes[s] = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            s += 1;
        }
        let nodes = &nodes[..s];
        let mut best: [Option<W>; 64] = [None; 64];
        let mut done = [false; 64];
        let mut current = 0;
        done[0] = true;
        let mut total = W::zero();
        for _ in 1..s {
            let cu = nodes[current];
            let mut pick = usize::MAX;
            for j in 0..s {
                if done[j] {
                    continue;
                }
                let v = nodes[j];
                if self.adj[cu] >> v & 1 == 1 {
                    let c = w[cu * self.n + v];
                    if best[j].is_none_or(|b| c < b) {
                        best[j] = Some(c);
                    }
                }
                if best[j].is_some() && (pick == usize::MAX || best[j] < best[pick]) {
                    pick = j;
                }
            }
            // `pick` exists because the side is connected.
            done[pick] = true;
            total = total + best[pick].expect("connected side");
            current = pick;
        }
        total
    }
}

#[derive(Debug, Clone, Copy)]
struct ChunkOutcome<W> {
    best: Option<(W, u64)>,
    feasible: u64,
}

impl<W: Weight> ChunkOutcome<W> {
    fn empty() -> Self {
        Self {
            best: None,
            feasible: 0,
        }
    }

    fn merge(self, other: Self) -> Self {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self {
            best,
            feasible: self.feasible + other.feasible,
        }
    }
}

fn scan<W: Weight>(dense: &Dense<W>, lo: u64, hi: u64, strategy: Strategy) -> ChunkOutcome<W> {
    let mut sides = vec![0u64; dense.trees];
    let mut out = ChunkOutcome::empty();
    for code in lo..hi {
        dense.decode(code, &mut sides);
        if !sides
            .iter()
            .enumerate()
            .all(|(i, &m)| dense.connected(m, dense.roots[i]))
        {
            continue;
        }
        out.feasible += 1;
        if let (Strategy::BranchAndBound, Some((best, _))) = (strategy, out.best) {
            // A later code must be strictly cheaper to win.
            if dense.lower_bound(&sides) >= best {
                continue;
            }
        }
        let cost = sides
            .iter()
            .enumerate()
            .fold(W::zero(), |acc, (i, &m)| acc + dense.side_cost(m, i));
        if out.best.is_none_or(|(b, _)| cost < b) {
            out.best = Some((cost, code));
        }
    }
    out
}

fn partition_count(trees: usize, free: usize, max_free_nodes: usize) -> Result<u64, SolverError> {
    let too_large = || {
        SolverError::TooLarge(format!(
            "{trees}^{free} partitions exceed the 2^{max_free_nodes} enumeration bound"
        ))
    };
    let total = (trees as u64)
        .checked_pow(free as u32)
        .ok_or_else(too_large)?;
    let limit = 1u64
        .checked_shl(max_free_nodes.min(63) as u32)
        .unwrap_or(u64::MAX);
    if total > limit {
        return Err(too_large());
    }
    Ok(total)
}

/// Minimum-cost spanning forest with tree `i` rooted at `roots[i]`.
/// The instance budget is ignored.
pub fn solve_exact<W: Weight>(
    inst: &Instance<W>,
    opts: &SolveOptions,
) -> Result<SolveResult<W>, SolverError> {
    let g = inst.graph();
    if g.num_nodes() > 64 {
        return Err(SolverError::TooLarge(format!(
            "{} nodes (at most 64 supported)",
            g.num_nodes()
        )));
    }
    let free = g.num_nodes() - g.num_trees();
    let total = partition_count(g.num_trees(), free, opts.max_free_nodes)?;
    W::checked_sum(g.edges().iter().flat_map(|e| e.costs.iter().copied()))
        .ok_or(SolverError::Overflow)?;

    let dense = Dense::new(inst);
    let outcome = if opts.parallel && total > 4096 {
        let chunks = (rayon::current_num_threads() as u64 * 16).min(total);
        let step = total.div_ceil(chunks);
        (0..chunks)
            .into_par_iter()
            .map(|c| scan(&dense, c * step, ((c + 1) * step).min(total), opts.strategy))
            .reduce(ChunkOutcome::empty, ChunkOutcome::merge)
    } else {
        scan(&dense, 0, total, opts.strategy)
    };

    let (min_cost, code) = outcome.best.ok_or(SolverError::NoSpanningForest)?;
    let mut sides = vec![0u64; dense.trees];
    dense.decode(code, &mut sides);
    let mut trees = Vec::with_capacity(dense.trees);
    for (i, &mask) in sides.iter().enumerate() {
        let nodes: BTreeSet<usize> = (0..dense.n).filter(|&v| mask >> v & 1 == 1).collect();
        match mst(g, &nodes, i)? {
            Mst::Spanning { edges, .. } => trees.push(Tree::new(dense.roots[i], edges)),
            Mst::Disconnected => unreachable!("feasible partition has a disconnected side"),
        }
    }
    Ok(SolveResult {
        min_cost,
        forest: SpanningForest::new(trees),
        feasible_partitions: outcome.feasible,
    })
}

/// Decision form: is there a forest of cost at most the instance budget?
pub fn solve_decision<W: Weight>(
    inst: &Instance<W>,
    opts: &SolveOptions,
) -> Result<bool, SolverError> {
    let budget = inst.budget().ok_or(SolverError::MissingBudget)?;
    Ok(solve_exact(inst, opts)?.min_cost <= budget)
}

/// Partition code of a forest in the encoding used by [`solve_exact`].
pub(crate) fn partition_code(inst: &Instance<impl Weight>, forest: &SpanningForest) -> Option<u64> {
    let roots = inst.roots();
    let t = roots.len() as u64;
    let mut code = 0u64;
    for v in (0..inst.graph().num_nodes()).filter(|v| !roots.contains(v)) {
        code = code * t + forest.tree_of(v)? as u64;
    }
    Some(code)
}
