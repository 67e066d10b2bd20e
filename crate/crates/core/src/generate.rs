//! Seeded instance generators. Output depends only on the parameters and
//! seed (ChaCha8 stream).

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, CnfError, Formula, Literal};
use crate::hgraph::{GraphError, HeteroGraph, Instance};
use crate::Cost;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random 3-CNF: each clause draws three distinct variables and random signs.
pub fn random_formula<R: Rng>(
    num_vars: usize,
    num_clauses: usize,
    rng: &mut R,
) -> Result<Formula, CnfError> {
    if num_vars < 3 {
        return Err(CnfError::TooFewVariables(num_vars));
    }
    let clauses = (0..num_clauses)
        .map(|_| {
            let vars = sample(rng, num_vars, 3);
            let mut lits = [Literal::positive(1); 3];
            for (slot, v) in lits.iter_mut().zip(vars.iter()) {
                *slot = Literal::new(v + 1, rng.gen_bool(0.5));
            }
            Clause::new(lits)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Formula::new(num_vars, clauses)
}

pub fn random_formula_seeded(
    num_vars: usize,
    num_clauses: usize,
    seed: u64,
) -> Result<Formula, CnfError> {
    random_formula(num_vars, num_clauses, &mut rng_from_seed(seed))
}

/// Every clause over three distinct variables of `1..=num_vars`, with the
/// variables in increasing order: `8 · C(n, 3)` clauses.
pub fn all_clauses(num_vars: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    for vars in (1..=num_vars).combinations(3) {
        for signs in 0..8u8 {
            let lit = |k: usize| Literal::new(vars[k], signs >> (2 - k) & 1 == 1);
            out.push(Clause::new([lit(0), lit(1), lit(2)]).expect("distinct variables"));
        }
    }
    out
}

/// All formulas whose clause list is a size-`m` multiset of
/// [`all_clauses`]`(num_vars)`, in lexicographic order.
pub fn clause_multisets(num_vars: usize, m: usize) -> impl Iterator<Item = Formula> {
    all_clauses(num_vars)
        .into_iter()
        .combinations_with_replacement(m)
        .map(move |clauses| Formula::new(num_vars, clauses).expect("valid clauses"))
}

/// Parameters for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    pub nodes: usize,
    pub trees: usize,
    /// Fraction of the node pairs that receive an edge (rounded up).
    pub density: f64,
    /// Costs are drawn uniformly from `0..=max_cost`.
    pub max_cost: Cost,
    /// Optional cap on the edge count, applied after `density`.
    pub max_edges: Option<usize>,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            nodes: 8,
            trees: 2,
            density: 0.7,
            max_cost: 20,
            max_edges: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Random heterogeneous instance with distinct random roots and no budget.
pub fn random_instance<R: Rng>(p: &GraphParams, rng: &mut R) -> Result<Instance<Cost>, GenError> {
    if p.trees == 0 || p.trees > p.nodes {
        return Err(GenError::Params(format!(
            "need 1 <= trees <= nodes, got trees={} nodes={}",
            p.trees, p.nodes
        )));
    }
    if !(0.0..=1.0).contains(&p.density) {
        return Err(GenError::Params(format!(
            "density {} outside [0, 1]",
            p.density
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..p.nodes).tuple_combinations().collect();
    let mut count = (p.density * pairs.len() as f64).ceil() as usize;
    if let Some(cap) = p.max_edges {
        count = count.min(cap);
    }
    let mut picked = sample(rng, pairs.len(), count.min(pairs.len())).into_vec();
    picked.sort_unstable();
    let edges: Vec<_> = picked
        .into_iter()
        .map(|k| {
            let (u, v) = pairs[k];
            (
                u,
                v,
                (0..p.trees)
                    .map(|_| rng.gen_range(0..=p.max_cost))
                    .collect(),
            )
        })
        .collect();
    let graph = HeteroGraph::from_edges(p.nodes, p.trees, edges)?;
    let roots = sample(rng, p.nodes, p.trees).into_vec();
    Ok(Instance::new(graph, roots, None)?)
}

pub fn random_instance_seeded(p: &GraphParams, seed: u64) -> Result<Instance<Cost>, GenError> {
    random_instance(p, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_are_deterministic_and_valid() {
        let a = random_formula_seeded(4, 5, 1).unwrap();
        let b = random_formula_seeded(4, 5, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_clauses(), 5);
        assert_eq!(
            random_formula_seeded(2, 5, 1),
            Err(CnfError::TooFewVariables(2))
        );
    }

    #[test]
    fn clause_enumeration_counts() {
        assert_eq!(all_clauses(3).len(), 8);
        assert_eq!(all_clauses(4).len(), 32);
        // multisets of size m from 8 clauses: C(8 + m - 1, m)
        let counts: Vec<usize> = (1..=4).map(|m| clause_multisets(3, m).count()).collect();
        assert_eq!(counts, vec![8, 36, 120, 330]);
    }

    #[test]
    fn instances_respect_params() {
        let p = GraphParams {
            nodes: 9,
            trees: 2,
            density: 0.5,
            max_cost: 20,
            max_edges: Some(18),
        };
        let inst = random_instance_seeded(&p, 2).unwrap();
        assert_eq!(inst.graph().num_edges(), 18);
        assert!(inst
            .graph()
            .edges()
            .iter()
            .all(|e| e.costs.iter().all(|&c| c <= 20)));
        assert_eq!(inst, random_instance_seeded(&p, 2).unwrap());
        assert!(random_instance_seeded(&GraphParams { trees: 10, ..p }, 0).is_err());
        assert!(random_instance_seeded(&GraphParams { density: 1.5, ..p }, 0).is_err());
    }
}
