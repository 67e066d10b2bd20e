//! The 3-SAT gadget graph and certificate translation in both directions.
//!
//! Node layout for a formula with `n` variables and `m` clauses:
//! `t = 0`, `f = 1`, `x_i = 2i`, `¬x_i = 2i + 1` (`i` in `1..=n`) and
//! `C_j = 2n + 1 + j` (`j` in `1..=m`). Tree 0 is rooted at `t` and priced by
//! the first cost function, tree 1 at `f` and priced by the second.
//!
//! With `a = n + 1` the gadget edges cost (first, second):
//!
//! | edge          | type | general      | metric variant |
//! |---------------|------|--------------|----------------|
//! | `(x_i, ¬x_i)` | X    | `(1, 1)`     | same           |
//! | `(t, x_i)`    | T    | `(a, a²)`    | same           |
//! | `(f, ¬x_i)`   | F    | `(a², a)`    | same           |
//! | `(C_j, x_i)`  | C    | `(a², 2a²)`  | `(a², a² + a)` |
//! | `(C_j, ¬x_i)` | C    | `(2a², a²)`  | `(a² + a, a²)` |
//!
//! and the budget is `k = m·a² + n·a + n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{evaluate, Assignment, CnfError, Formula, Literal};
use crate::hgraph::dot::EdgeStyle;
use crate::hgraph::{
    metric_closure_complete, normalize, verify_forest, GraphError, HeteroGraph, Instance,
    SpanningForest, Tree,
};
use crate::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("costs for n={n}, m={m} overflow the cost type")]
    Overflow { n: usize, m: usize },
    #[error("assignment does not satisfy the formula")]
    NotAModel,
    #[error("formula (n={n}, m={m}) does not match the reduction (n={art_n}, m={art_m})")]
    FormulaMismatch {
        n: usize,
        m: usize,
        art_n: usize,
        art_m: usize,
    },
    #[error("forest is not a valid certificate: {}", .violations.join("; "))]
    InvalidCertificate { violations: Vec<String> },
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The raw gadget.
    General,
    /// The gadget completed by metric closure.
    CompleteClosure,
    /// Clause costs raised to `a² + a` on the wrong side, then closed.
    Metric,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::General, Variant::CompleteClosure, Variant::Metric];

    pub fn name(self) -> &'static str {
        match self {
            Variant::General => "general",
            Variant::CompleteClosure => "closure",
            Variant::Metric => "metric",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "general" => Ok(Variant::General),
            "closure" | "complete" | "complete-closure" | "complete_closure" => {
                Ok(Variant::CompleteClosure)
            }
            "metric" => Ok(Variant::Metric),
            other => Err(format!(
                "unknown variant {other:?} (expected general, closure or metric)"
            )),
        }
    }
}

/// The four gadget edge families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    /// `(x_i, ¬x_i)`
    X,
    /// `(t, x_i)`
    T,
    /// `(f, ¬x_i)`
    F,
    /// clause to literal
    C,
}

impl EdgeType {
    /// Dashed for X, thin for T/F, bold for C.
    pub fn style(self) -> EdgeStyle {
        match self {
            EdgeType::X => EdgeStyle::Dashed,
            EdgeType::T | EdgeType::F => EdgeStyle::Thin,
            EdgeType::C => EdgeStyle::Bold,
        }
    }
}

/// Style for any edge, closure-added edges dotted.
pub fn style_of(edge_type: Option<EdgeType>) -> EdgeStyle {
    edge_type.map_or(EdgeStyle::Dotted, EdgeType::style)
}

pub const T_NODE: usize = 0;
pub const F_NODE: usize = 1;

pub fn true_literal_node(i: usize) -> usize {
    2 * i
}

pub fn false_literal_node(i: usize) -> usize {
    2 * i + 1
}

pub fn literal_node(l: Literal) -> usize {
    if l.is_negated() {
        false_literal_node(l.variable())
    } else {
        true_literal_node(l.variable())
    }
}

/// `m·(n+1)² + n·(n+1) + n`.
pub fn budget_k<W: Weight>(n: usize, m: usize) -> Result<W, ReductionError> {
    let overflow = ReductionError::Overflow { n, m };
    let a = n
        .checked_add(1)
        .and_then(W::from_usize)
        .ok_or(overflow.clone())?;
    let n_w = W::from_usize(n).ok_or(overflow.clone())?;
    let m_w = W::from_usize(m).ok_or(overflow.clone())?;
    let sq = a.checked_mul(&a).ok_or(overflow.clone())?;
    m_w.checked_mul(&sq)
        .and_then(|x| x.checked_add(&n_w.checked_mul(&a)?))
        .and_then(|x| x.checked_add(&n_w))
        .ok_or(overflow)
}

/// A reduced instance plus what is needed to translate certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifacts<W = crate::Cost> {
    instance: Instance<W>,
    variant: Variant,
    num_vars: usize,
    num_clauses: usize,
    edge_types: BTreeMap<(usize, usize), EdgeType>,
}

impl<W: Weight> ReductionArtifacts<W> {
    pub fn instance(&self) -> &Instance<W> {
        &self.instance
    }

    pub fn into_instance(self) -> Instance<W> {
        self.instance
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn t_node(&self) -> usize {
        T_NODE
    }

    pub fn f_node(&self) -> usize {
        F_NODE
    }

    pub fn node_of_true_literal(&self, i: usize) -> usize {
        assert!((1..=self.num_vars).contains(&i));
        true_literal_node(i)
    }

    pub fn node_of_false_literal(&self, i: usize) -> usize {
        assert!((1..=self.num_vars).contains(&i));
        false_literal_node(i)
    }

    pub fn node_of_clause(&self, j: usize) -> usize {
        assert!((1..=self.num_clauses).contains(&j));
        2 * self.num_vars + 1 + j
    }

    /// Gadget type of edge `{u, v}`; `None` for closure-added edges.
    pub fn edge_type(&self, u: usize, v: usize) -> Option<EdgeType> {
        self.edge_types.get(&normalize(u, v)).copied()
    }

    pub fn edge_types(&self) -> &BTreeMap<(usize, usize), EdgeType> {
        &self.edge_types
    }

    pub fn budget(&self) -> W {
        self.instance
            .budget()
            .expect("reductions always carry a budget")
    }

    /// Comment lines recorded alongside the written instance.
    pub fn describe(&self, f: &Formula) -> Vec<String> {
        let mut lines = vec![format!(
            "3-SAT reduction: n={} m={} variant={} k={}",
            self.num_vars,
            self.num_clauses,
            self.variant,
            self.budget()
        )];
        for (j, c) in f.clauses().iter().enumerate() {
            let lits: Vec<String> = c
                .literals()
                .iter()
                .map(|l| {
                    if l.is_negated() {
                        format!("~x{}", l.variable())
                    } else {
                        format!("x{}", l.variable())
                    }
                })
                .collect();
            lines.push(format!("C{} = {}", j + 1, lits.join(" ")));
        }
        lines
    }

    fn check_formula(&self, f: &Formula) -> Result<(), ReductionError> {
        if f.num_vars() != self.num_vars || f.num_clauses() != self.num_clauses {
            return Err(ReductionError::FormulaMismatch {
                n: f.num_vars(),
                m: f.num_clauses(),
                art_n: self.num_vars,
                art_m: self.num_clauses,
            });
        }
        Ok(())
    }
}

/// Builds the gadget graph for `f` in the requested variant.
pub fn reduce<W: Weight>(
    f: &Formula,
    variant: Variant,
) -> Result<ReductionArtifacts<W>, ReductionError> {
    let n = f.num_vars();
    let m = f.num_clauses();
    let overflow = ReductionError::Overflow { n, m };
    let budget = budget_k::<W>(n, m)?;

    let one = W::one();
    let a = W::from_usize(n + 1).ok_or(overflow.clone())?;
    let sq = a.checked_mul(&a).ok_or(overflow.clone())?;
    let two_sq = sq.checked_add(&sq).ok_or(overflow.clone())?;
    let wrong_side = match variant {
        Variant::Metric => sq.checked_add(&a).ok_or(overflow.clone())?,
        _ => two_sq,
    };

    let num_nodes = 2 * n + m + 2;
    let mut edges = Vec::with_capacity(3 * n + 3 * m);
    let mut edge_types = BTreeMap::new();
    let mut push = |u: usize, v: usize, costs: [W; 2], ty: EdgeType| {
        edge_types.insert(normalize(u, v), ty);
        edges.push((u, v, costs.to_vec()));
    };
    for i in 1..=n {
        push(
            true_literal_node(i),
            false_literal_node(i),
            [one, one],
            EdgeType::X,
        );
        push(T_NODE, true_literal_node(i), [a, sq], EdgeType::T);
        push(F_NODE, false_literal_node(i), [sq, a], EdgeType::F);
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let c = 2 * n + 2 + j;
        for &l in clause.literals() {
            let costs = if l.is_negated() {
                [wrong_side, sq]
            } else {
                [sq, wrong_side]
            };
            push(c, literal_node(l), costs, EdgeType::C);
        }
    }

    let mut labels = vec![(T_NODE, "t".to_string()), (F_NODE, "f".to_string())];
    for i in 1..=n {
        labels.push((true_literal_node(i), format!("x{i}")));
        labels.push((false_literal_node(i), format!("~x{i}")));
    }
    labels.extend((1..=m).map(|j| (2 * n + 1 + j, format!("C{j}"))));

    let mut graph = HeteroGraph::from_edges(num_nodes, 2, edges)
        .map_err(|e| match e {
            GraphError::CostOverflow(_) => overflow.clone(),
            other => other.into(),
        })?
        .with_labels(labels)?;
    if variant != Variant::General {
        graph = metric_closure_complete(&graph).map_err(|e| match e {
            GraphError::CostOverflow(_) => overflow.clone(),
            other => other.into(),
        })?;
    }
    let instance = Instance::new(graph, vec![T_NODE, F_NODE], Some(budget))?;
    Ok(ReductionArtifacts {
        instance,
        variant,
        num_vars: n,
        num_clauses: m,
        edge_types,
    })
}

/// Turns a satisfying assignment into a forest of cost exactly `k`.
///
/// Each variable contributes its `t`/`f` anchor edge and its X edge (placed
/// in the same tree). Each clause hangs off its first true literal.
pub fn assignment_to_forest<W: Weight>(
    art: &ReductionArtifacts<W>,
    f: &Formula,
    a: &Assignment,
) -> Result<SpanningForest, ReductionError> {
    art.check_formula(f)?;
    if !evaluate(f, a)? {
        return Err(ReductionError::NotAModel);
    }
    let mut true_side = Tree::singleton(T_NODE);
    let mut false_side = Tree::singleton(F_NODE);
    for i in 1..=f.num_vars() {
        let (side, anchor) = if a.value(i) {
            (&mut true_side, (T_NODE, true_literal_node(i)))
        } else {
            (&mut false_side, (F_NODE, false_literal_node(i)))
        };
        side.edges.insert(anchor);
        side.edges
            .insert((true_literal_node(i), false_literal_node(i)));
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let lit = clause
            .literals()
            .iter()
            .copied()
            .find(|l| l.eval(a.value(l.variable())))
            .expect("model satisfies every clause");
        // Both literal nodes of a variable share its tree.
        let side = if a.value(lit.variable()) {
            &mut true_side
        } else {
            &mut false_side
        };
        side.edges
            .insert(normalize(art.node_of_clause(j + 1), literal_node(lit)));
    }
    Ok(SpanningForest::new(vec![true_side, false_side]))
}

/// Reads the assignment back from a budget-respecting forest: `x_i` is true
/// iff the forest uses edge `(t, x_i)`.
pub fn forest_to_assignment<W: Weight>(
    art: &ReductionArtifacts<W>,
    forest: &SpanningForest,
) -> Result<Assignment, ReductionError> {
    let report = verify_forest(art.instance(), forest);
    if !report.valid {
        return Err(ReductionError::InvalidCertificate {
            violations: report.violations.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(Assignment::from_fn(art.num_vars, |i| {
        forest.contains_edge(T_NODE, true_literal_node(i))
    }))
}

/// Recovers gadget edge types from the `t`, `f`, `x<i>`, `~x<i>`, `C<j>`
/// labels a reduction writes. Clause-to-literal pairs always read as C,
/// including closure edges to literals outside the clause.
pub fn classify_by_labels(u: Option<&str>, v: Option<&str>) -> Option<EdgeType> {
    #[derive(PartialEq)]
    enum Sym {
        T,
        F,
        Pos(usize),
        Neg(usize),
        Clause,
    }
    fn parse(s: &str) -> Option<Sym> {
        match s {
            "t" => Some(Sym::T),
            "f" => Some(Sym::F),
            _ => {
                if let Some(rest) = s.strip_prefix("~x") {
                    rest.parse().ok().map(Sym::Neg)
                } else if let Some(rest) = s.strip_prefix('x') {
                    rest.parse().ok().map(Sym::Pos)
                } else {
                    s.strip_prefix('C')
                        .and_then(|r| r.parse::<usize>().ok())
                        .map(|_| Sym::Clause)
                }
            }
        }
    }
    let (a, b) = (parse(u?)?, parse(v?)?);
    let pair = |p: &Sym, q: &Sym| match (p, q) {
        (Sym::Pos(i), Sym::Neg(j)) if i == j => Some(EdgeType::X),
        (Sym::T, Sym::Pos(_)) => Some(EdgeType::T),
        (Sym::F, Sym::Neg(_)) => Some(EdgeType::F),
        (Sym::Clause, Sym::Pos(_) | Sym::Neg(_)) => Some(EdgeType::C),
        _ => None,
    };
    pair(&a, &b).or_else(|| pair(&b, &a))
}
