//! Cross-checks of each fast path against an independent slow one.

use std::collections::BTreeSet;

use hmsf_core::cnf::{evaluate, parse_dimacs, sat_brute_force, sat_dpll, Clause, Formula, Literal};
use hmsf_core::generate::{random_instance_seeded, GraphParams};
use hmsf_core::hgraph::{
    check_triangle_inequality, forest_cost, is_complete, metric_closure_complete, verify_forest,
    HeteroGraph, Instance,
};
use hmsf_core::reduction::{reduce, Variant};
use hmsf_core::solver::{
    brute_force_enum, mst, solve_exact, Mst, SolveOptions, Strategy as SearchStrategy,
};
use hmsf_core::{Cost, Graph};
use proptest::prelude::*;

/// Floyd–Warshall over one cost index; `None` = unreachable.
fn floyd_warshall(g: &Graph, tree: usize) -> Vec<Vec<Option<Cost>>> {
    let n = g.num_nodes();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for e in g.edges() {
        let w = Some(e.costs[tree]);
        d[e.u][e.v] = d[e.u][e.v].min(w).or(w);
        d[e.v][e.u] = d[e.u][e.v];
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn example_formula() -> Formula {
    parse_dimacs("p cnf 5 2\n1 -2 3 0\n3 -4 -5 0\n").unwrap()
}

fn all_patterns() -> Formula {
    let clauses = (0..8i64)
        .map(|s| {
            let sign = |bit: i64, v: i64| if s >> bit & 1 == 1 { -v } else { v };
            Clause::from_dimacs([sign(0, 1), sign(1, 2), sign(2, 3)]).unwrap()
        })
        .collect();
    Formula::new(3, clauses).unwrap()
}

fn assert_closure_matches_oracle(g: &Graph, closed: &Graph) {
    assert!(is_complete(closed));
    for tree in 0..g.num_trees() {
        let oracle = floyd_warshall(g, tree);
        for e in closed.edges() {
            match g.edge(e.u, e.v) {
                Some(orig) => assert_eq!(orig, e, "original edge changed"),
                None => assert_eq!(
                    Some(e.costs[tree]),
                    oracle[e.u][e.v],
                    "added edge ({}, {})",
                    e.u,
                    e.v
                ),
            }
        }
    }
}

#[test]
fn gadget_closure_matches_floyd_warshall() {
    let general = reduce::<Cost>(&example_formula(), Variant::General).unwrap();
    let g = general.instance().graph();
    let closed = metric_closure_complete(g).unwrap();
    assert_closure_matches_oracle(g, &closed);
    // t–x_i–¬x_i–f: 6 + 1 + 36 under w1, 36 + 1 + 6 under w2
    let fw1 = floyd_warshall(g, 0);
    let fw2 = floyd_warshall(g, 1);
    assert_eq!((fw1[0][1], fw2[0][1]), (Some(43), Some(43)));
    assert_eq!(closed.edge(0, 1).unwrap().costs, vec![43, 43]);
    assert_eq!(closed.num_edges(), 91);
}

#[test]
fn random_closures_match_floyd_warshall() {
    for seed in 0..40 {
        let p = GraphParams {
            nodes: 7,
            trees: 2,
            density: 0.45,
            max_cost: 30,
            max_edges: None,
        };
        let inst = random_instance_seeded(&p, seed).unwrap();
        match metric_closure_complete(inst.graph()) {
            Ok(closed) => assert_closure_matches_oracle(inst.graph(), &closed),
            Err(_) => assert!(floyd_warshall(inst.graph(), 0)
                .iter()
                .flatten()
                .any(Option::is_none)),
        }
    }
}

#[test]
fn equilateral_graphs_are_metric() {
    for n in 2..7 {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v, vec![5u64, 9])));
        let g = HeteroGraph::from_edges(n, 2, edges).unwrap();
        assert!(check_triangle_inequality(&g, 0).unwrap().is_empty());
        assert!(check_triangle_inequality(&g, 1).unwrap().is_empty());
    }
}

#[test]
fn triangle_check_against_direct_enumeration() {
    let general = reduce::<Cost>(&example_formula(), Variant::General).unwrap();
    let closed = metric_closure_complete(general.instance().graph()).unwrap();
    let n = closed.num_nodes();
    for tree in 0..2 {
        let reported: BTreeSet<_> = check_triangle_inequality(&closed, tree)
            .unwrap()
            .into_iter()
            .collect();
        let mut expected = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let w = |x, y| closed.cost(x, y, tree).unwrap();
                    if w(a, b) + w(b, c) < w(a, c) {
                        expected.insert((a, b, c));
                    }
                }
            }
        }
        assert_eq!(reported, expected);
    }
    // 2a² clause costs on the wrong side are longer than detours through f / t
    assert!(!check_triangle_inequality(&closed, 1).unwrap().is_empty());
    let metric = reduce::<Cost>(&example_formula(), Variant::Metric).unwrap();
    for tree in 0..2 {
        assert!(check_triangle_inequality(metric.instance().graph(), tree)
            .unwrap()
            .is_empty());
    }
}

fn small_params(seed: u64) -> GraphParams {
    let nodes = 3 + (seed % 7) as usize;
    let pairs = nodes * (nodes - 1) / 2;
    let cap = pairs.min(18);
    let min_density = 0.5f64;
    let density = min_density + (seed % 5) as f64 * 0.1;
    GraphParams {
        nodes,
        trees: 2,
        density: density.min(1.0),
        max_cost: 20,
        max_edges: Some(cap),
    }
}

#[test]
fn exact_solver_equals_brute_force() {
    for seed in 0..120 {
        let inst = random_instance_seeded(&small_params(seed), seed).unwrap();
        let exact = solve_exact(&inst, &SolveOptions::default());
        let brute = brute_force_enum(&inst);
        assert_eq!(exact, brute, "seed {seed}");
        if let Ok(r) = exact {
            let report = verify_forest(&inst, &r.forest);
            assert!(report.valid);
            assert_eq!(report.cost, Some(r.min_cost));
        }
    }
}

#[test]
fn three_tree_solver_equals_brute_force() {
    for seed in 0..40 {
        let p = GraphParams {
            nodes: 6 + (seed % 3) as usize,
            trees: 3,
            density: 0.6,
            max_cost: 15,
            max_edges: Some(14),
        };
        let inst = random_instance_seeded(&p, 1000 + seed).unwrap();
        assert_eq!(
            solve_exact(&inst, &SolveOptions::default()),
            brute_force_enum(&inst),
            "seed {seed}"
        );
    }
}

#[test]
fn strategies_and_schedules_agree() {
    for seed in 0..30 {
        let p = GraphParams {
            nodes: 14,
            trees: 2,
            density: 0.4,
            max_cost: 50,
            max_edges: None,
        };
        let inst = random_instance_seeded(&p, seed).unwrap();
        let base = solve_exact(
            &inst,
            &SolveOptions {
                parallel: false,
                ..Default::default()
            },
        );
        for strategy in [SearchStrategy::Enumerate, SearchStrategy::BranchAndBound] {
            for parallel in [false, true] {
                let opts = SolveOptions {
                    strategy,
                    parallel,
                    ..Default::default()
                };
                assert_eq!(
                    solve_exact(&inst, &opts),
                    base,
                    "seed {seed} {strategy:?} parallel={parallel}"
                );
            }
        }
    }
}

#[test]
fn partition_sides_are_minimum_spanning_trees() {
    for seed in 0..40 {
        let p = GraphParams {
            nodes: 10,
            trees: 2,
            density: 0.5,
            max_cost: 30,
            max_edges: None,
        };
        let inst = random_instance_seeded(&p, seed).unwrap();
        let Ok(r) = solve_exact(&inst, &SolveOptions::default()) else {
            continue;
        };
        let mut total = 0;
        for (i, tree) in r.forest.trees.iter().enumerate() {
            match mst(inst.graph(), &tree.nodes(), i).unwrap() {
                Mst::Spanning { edges, cost } => {
                    assert_eq!(edges, tree.edges.iter().copied().collect::<Vec<_>>());
                    total += cost;
                }
                Mst::Disconnected => panic!("solver returned a disconnected side"),
            }
        }
        assert_eq!(total, r.min_cost);
        assert_eq!(forest_cost(inst.graph(), &r.forest), Ok(r.min_cost));
    }
}

#[test]
fn adding_an_edge_never_increases_the_optimum() {
    for seed in 0..60 {
        let p = GraphParams {
            nodes: 9,
            trees: 2,
            density: 0.5,
            max_cost: 20,
            max_edges: None,
        };
        let inst = random_instance_seeded(&p, seed).unwrap();
        let g = inst.graph();
        let Some((u, v)) = (0..g.num_nodes())
            .flat_map(|u| ((u + 1)..g.num_nodes()).map(move |v| (u, v)))
            .find(|&(u, v)| !g.has_edge(u, v))
        else {
            continue;
        };
        let mut edges: Vec<_> = g
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.costs.clone()))
            .collect();
        edges.push((u, v, vec![seed % 7, seed % 5]));
        let bigger = Instance::new(
            HeteroGraph::from_edges(g.num_nodes(), 2, edges).unwrap(),
            inst.roots().to_vec(),
            None,
        )
        .unwrap();
        let before = solve_exact(&inst, &SolveOptions::default()).map(|r| r.min_cost);
        let after = solve_exact(&bigger, &SolveOptions::default())
            .unwrap()
            .min_cost;
        if let Ok(b) = before {
            assert!(after <= b, "seed {seed}: {after} > {b}");
        }
    }
}

#[test]
fn gadget_optimum_examples() {
    let opts = SolveOptions::default();
    let example = reduce::<Cost>(&example_formula(), Variant::General).unwrap();
    assert_eq!(solve_exact(example.instance(), &opts).unwrap().min_cost, 107);

    let unsat = reduce::<Cost>(&all_patterns(), Variant::General).unwrap();
    assert_eq!(unsat.budget(), 143);
    let r = solve_exact(unsat.instance(), &opts).unwrap();
    assert!(r.min_cost > 143, "min {}", r.min_cost);

    // 9 nodes, 12 edges: small enough for the edge-subset oracle
    let single = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
    let art = reduce::<Cost>(&single, Variant::General).unwrap();
    assert_eq!(art.instance().graph().num_nodes(), 9);
    assert_eq!(art.instance().graph().num_edges(), 12);
    let brute = brute_force_enum(art.instance()).unwrap();
    assert_eq!(brute.min_cost, 31);
    assert_eq!(solve_exact(art.instance(), &opts).unwrap(), brute);
}

fn formula_strategy(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = Formula> {
    (3..=max_vars).prop_flat_map(move |n| {
        let clause = (
            proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 3),
            any::<[bool; 3]>(),
        )
            .prop_map(|(vars, signs)| {
                Clause::new([0, 1, 2].map(|k| Literal::new(vars[k], signs[k]))).unwrap()
            });
        proptest::collection::vec(clause, 1..=max_clauses)
            .prop_map(move |cs| Formula::new(n, cs).unwrap())
    })
}

proptest! {
    #[test]
    fn dpll_agrees_with_brute_force(f in formula_strategy(10, 60)) {
        let brute = sat_brute_force(&f, 30).unwrap();
        let dpll = sat_dpll(&f);
        prop_assert_eq!(brute.is_some(), dpll.is_some());
        for model in brute.iter().chain(dpll.iter()) {
            prop_assert!(evaluate(&f, model).unwrap());
        }
    }

    #[test]
    fn dimacs_round_trip(f in formula_strategy(12, 20)) {
        prop_assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn general_gadget_sizes(f in formula_strategy(12, 20)) {
        let art = reduce::<Cost>(&f, Variant::General).unwrap();
        let (n, m) = (f.num_vars(), f.num_clauses());
        prop_assert_eq!(art.instance().graph().num_nodes(), 2 * n + m + 2);
        prop_assert_eq!(art.instance().graph().num_edges(), 3 * n + 3 * m);
    }
}
