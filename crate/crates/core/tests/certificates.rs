use hmsf_core::cnf::{parse_dimacs, sat_brute_force, Assignment, Formula};
use hmsf_core::generate::{random_formula_seeded, random_instance_seeded, GraphParams};
use hmsf_core::hgraph::format::{
    parse_forest, parse_instance, write_forest, write_instance, write_instance_with_comments,
};
use hmsf_core::hgraph::{forest_cost, verify_forest, Violation};
use hmsf_core::reduction::{assignment_to_forest, forest_to_assignment, reduce, Variant};
use hmsf_core::solver::{solve_decision, solve_exact, SolveOptions};
use hmsf_core::{Cost, HmsfInstance};

fn example_formula() -> Formula {
    parse_dimacs("p cnf 5 2\n1 -2 3 0\n3 -4 -5 0\n").unwrap()
}

#[test]
fn verifier_examples_on_model_forest() {
    let f = example_formula();
    let art = reduce::<Cost>(&f, Variant::General).unwrap();
    let a = Assignment::from_values(vec![true, false, true, false, false]);
    let forest = assignment_to_forest(&art, &f, &a).unwrap();

    let ok = verify_forest(art.instance(), &forest);
    assert!(ok.valid);
    assert_eq!(ok.cost, Some(107));

    // x2 is false, so node x2 is reached only through its X edge
    let mut cut = forest.clone();
    assert!(cut.trees[1].edges.remove(&(4, 5)));
    let r = verify_forest(art.instance(), &cut);
    assert!(!r.valid);
    assert!(
        r.violations
            .contains(&Violation::NodeNotSpanned { node: 4 }),
        "{r}"
    );

    let tight = art.instance().clone().with_budget(Some(106));
    let r = verify_forest(&tight, &forest);
    assert!(!r.valid);
    assert_eq!(
        r.violations,
        vec![Violation::CostExceedsBudget {
            cost: 107,
            budget: 106
        }]
    );
    assert!(r.to_string().contains("cost exceeds budget"));
}

#[test]
fn forest_for_every_model_of_example() {
    let f = example_formula();
    for variant in Variant::ALL {
        let art = reduce::<Cost>(&f, variant).unwrap();
        for bits in 0u32..32 {
            let a = Assignment::from_fn(5, |v| bits >> (v - 1) & 1 == 1);
            match assignment_to_forest(&art, &f, &a) {
                Ok(forest) => {
                    assert_eq!(forest_cost(art.instance().graph(), &forest), Ok(107));
                    assert_eq!(forest_to_assignment(&art, &forest).unwrap(), a);
                }
                Err(e) => assert!(!hmsf_core::cnf::evaluate(&f, &a).unwrap(), "{e}"),
            }
        }
    }
}

#[test]
fn decision_examples() {
    let opts = SolveOptions::default();
    let art = reduce::<Cost>(&example_formula(), Variant::General).unwrap();
    assert!(solve_decision(art.instance(), &opts).unwrap());
    let unsat = parse_dimacs(
        "p cnf 3 8\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 -2 3 0\n1 2 -3 0\n-1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n",
    )
    .unwrap();
    assert!(sat_brute_force(&unsat, 30).unwrap().is_none());
    let art = reduce::<Cost>(&unsat, Variant::General).unwrap();
    assert!(!solve_decision(art.instance(), &opts).unwrap());
}

#[test]
fn solver_forests_translate_back_to_models() {
    for seed in 0..25 {
        let f = random_formula_seeded(4, 1 + (seed % 5) as usize, seed).unwrap();
        for variant in Variant::ALL {
            let art = reduce::<Cost>(&f, variant).unwrap();
            let r = solve_exact(art.instance(), &SolveOptions::default()).unwrap();
            assert_eq!(r.min_cost, art.budget());
            let a = forest_to_assignment(&art, &r.forest).unwrap();
            assert!(hmsf_core::cnf::evaluate(&f, &a).unwrap());
        }
    }
}

#[test]
fn instance_files_round_trip() {
    let f = example_formula();
    for variant in Variant::ALL {
        let art = reduce::<Cost>(&f, variant).unwrap();
        let text = write_instance_with_comments(art.instance(), &art.describe(&f));
        assert!(text.contains("# 3-SAT reduction: n=5 m=2"));
        let back: HmsfInstance = parse_instance(&text).unwrap();
        assert_eq!(&back, art.instance());
        assert_eq!(write_instance(&back), write_instance(art.instance()));
    }
    for seed in 0..10 {
        let inst = random_instance_seeded(&GraphParams::default(), seed).unwrap();
        let back: HmsfInstance = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(back, inst);
    }
}

#[test]
fn certificate_files_round_trip() {
    let f = example_formula();
    let art = reduce::<Cost>(&f, Variant::Metric).unwrap();
    let forest = assignment_to_forest(&art, &f, &Assignment::all(5, true)).unwrap();
    let parsed = parse_forest(&write_forest(&forest)).unwrap();
    assert_eq!(parsed, forest);
    assert!(verify_forest(art.instance(), &parsed).valid);
}

#[test]
fn wide_costs_give_identical_answers() {
    let f = example_formula();
    let narrow = reduce::<u32>(&f, Variant::Metric).unwrap();
    let wide = reduce::<u128>(&f, Variant::Metric).unwrap();
    let opts = SolveOptions::default();
    let a = solve_exact(narrow.instance(), &opts).unwrap();
    let b = solve_exact(wide.instance(), &opts).unwrap();
    assert_eq!(u128::from(a.min_cost), b.min_cost);
    assert_eq!(a.forest, b.forest);
}
