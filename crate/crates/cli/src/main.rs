//! `hmsf`: reduce 3-CNF formulas to heterogeneous spanning-forest instances,
//! solve and verify them, and run the equivalence check end to end.
//!
//! Exit codes: 0 ok/valid/yes, 2 invalid certificate, 3 no (decision no,
//! unsatisfiable, not metric), 64 bad input, 65 cost overflow, 66 I/O error,
//! 67 solver limit, 70 equivalence violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmsf_core::cnf::{
    evaluate, parse_dimacs, sat_brute_force, CnfError, Formula, DEFAULT_MAX_BRUTE_FORCE_VARS,
};
use hmsf_core::generate::{random_formula_seeded, random_instance_seeded, GenError, GraphParams};
use hmsf_core::hgraph::dot::to_dot;
use hmsf_core::hgraph::format::{
    parse_forest, parse_instance, write_forest, write_instance, write_instance_with_comments,
    FormatError,
};
use hmsf_core::hgraph::{check_triangle_inequality, verify_forest, GraphError, SpanningForest};
use hmsf_core::reduction::{
    assignment_to_forest, classify_by_labels, forest_to_assignment, reduce, style_of,
    ReductionError, Variant,
};
use hmsf_core::solver::{
    solve_decision, solve_exact, SolveOptions, SolverError, Strategy, DEFAULT_MAX_FREE_NODES,
};
use hmsf_core::{Cost, HmsfInstance};

const EXIT_INVALID: u8 = 2;
const EXIT_NO: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_OVERFLOW: u8 = 65;
const EXIT_IO: u8 = 66;
const EXIT_LIMIT: u8 = 67;
const EXIT_VIOLATION: u8 = 70;

#[derive(Parser)]
#[command(
    name = "hmsf",
    version,
    about = "3-SAT to 2-heterogeneous minimum spanning forest toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a DIMACS 3-CNF formula to an instance file.
    Reduce {
        #[arg(long, default_value = "general", value_parser = parse_variant)]
        variant: Variant,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve an instance exactly, or answer "cost <= k?" with --decision.
    Solve {
        input: PathBuf,
        #[arg(long)]
        decision: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Enumerate)]
        strategy: StrategyArg,
        /// Write the optimal forest here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide a formula by brute force and print a model if one exists.
    Sat { input: PathBuf },
    /// Check a forest certificate against an instance.
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
    },
    /// Run the satisfiability / decision / certificate equivalence on one formula.
    Roundtrip {
        #[arg(long, default_value = "general", value_parser = parse_variant)]
        variant: Variant,
        input: PathBuf,
    },
    /// Report triangle-inequality violations per cost index.
    CheckMetric { input: PathBuf },
    /// Render an instance as Graphviz DOT.
    ExportDot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate seeded random inputs.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random 3-CNF formula in DIMACS format.
    Cnf {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random heterogeneous graph instance.
    Hgraph {
        #[command(flatten)]
        params: GraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    #[arg(long, default_value_t = 0.7)]
    density: f64,
    #[arg(long, default_value_t = 2)]
    trees: usize,
    #[arg(long, default_value_t = 20)]
    max_cost: Cost,
    #[arg(long)]
    max_edges: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Enumerate,
    BranchAndBound,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

/// A message for stderr plus the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn graph_code(e: &GraphError) -> u8 {
    match e {
        GraphError::CostOverflow(_) => EXIT_OVERFLOW,
        _ => EXIT_USAGE,
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Self {
        let code = match e {
            CnfError::TooManyVariables { .. } => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match &e {
            FormatError::Graph(g) => graph_code(g),
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        let code = match &e {
            ReductionError::Overflow { .. } => EXIT_OVERFLOW,
            ReductionError::Graph(g) => graph_code(g),
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match &e {
            SolverError::TooLarge(_) | SolverError::NoSpanningForest => EXIT_LIMIT,
            SolverError::Overflow => EXIT_OVERFLOW,
            SolverError::Graph(g) => graph_code(g),
            SolverError::MissingBudget | SolverError::EmptyNodeSet => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::new(EXIT_USAGE, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    Ok(parse_dimacs(&read(path)?)?)
}

fn read_instance(path: &Path) -> Result<HmsfInstance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn read_forest(path: &Path) -> Result<SpanningForest, Failure> {
    Ok(parse_forest(&read(path)?)?)
}

/// Solver options, with `HMSF_MAX_ENUM` overriding the enumeration bound.
fn solve_options(strategy: Strategy) -> Result<SolveOptions, Failure> {
    let max_free_nodes = match std::env::var("HMSF_MAX_ENUM") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("HMSF_MAX_ENUM={v:?} is not a non-negative integer"),
            )
        })?,
        Err(_) => DEFAULT_MAX_FREE_NODES,
    };
    Ok(SolveOptions {
        max_free_nodes,
        strategy,
        ..SolveOptions::default()
    })
}

fn cmd_reduce(variant: Variant, input: &Path, output: &Path) -> Result<u8, Failure> {
    let f = read_formula(input)?;
    let art = reduce::<Cost>(&f, variant)?;
    write(
        output,
        &write_instance_with_comments(art.instance(), &art.describe(&f)),
    )?;
    let g = art.instance().graph();
    println!(
        "n={} m={} nodes={} edges={} k={}",
        f.num_vars(),
        f.num_clauses(),
        g.num_nodes(),
        g.num_edges(),
        art.budget()
    );
    Ok(0)
}

fn cmd_solve(
    input: &Path,
    decision: bool,
    strategy: Strategy,
    certificate: Option<&Path>,
) -> Result<u8, Failure> {
    let inst = read_instance(input)?;
    let opts = solve_options(strategy)?;
    if decision {
        let budget = inst
            .budget()
            .ok_or_else(|| Failure::from(SolverError::MissingBudget))?;
        let yes = solve_decision(&inst, &opts)?;
        println!(
            "decision={} budget={budget}",
            if yes { "yes" } else { "no" }
        );
        return Ok(if yes { 0 } else { EXIT_NO });
    }
    let r = solve_exact(&inst, &opts)?;
    print!(
        "min_cost={} feasible_partitions={}",
        r.min_cost, r.feasible_partitions
    );
    if let Some(k) = inst.budget() {
        print!(" budget={k} within_budget={}", r.min_cost <= k);
    }
    println!();
    if let Some(path) = certificate {
        write(path, &write_forest(&r.forest))?;
    }
    Ok(0)
}

fn cmd_sat(input: &Path) -> Result<u8, Failure> {
    let f = read_formula(input)?;
    match sat_brute_force(&f, DEFAULT_MAX_BRUTE_FORCE_VARS)? {
        Some(a) => {
            println!("sat=true");
            println!("v {}", a.to_dimacs_model());
            Ok(0)
        }
        None => {
            println!("sat=false");
            Ok(EXIT_NO)
        }
    }
}

fn cmd_verify(instance: &Path, certificate: &Path) -> Result<u8, Failure> {
    let inst = read_instance(instance)?;
    let forest = read_forest(certificate)?;
    let report = verify_forest(&inst, &forest);
    println!("{report}");
    Ok(if report.valid { 0 } else { EXIT_INVALID })
}

fn cmd_roundtrip(variant: Variant, input: &Path) -> Result<u8, Failure> {
    let f = read_formula(input)?;
    let model = sat_brute_force(&f, DEFAULT_MAX_BRUTE_FORCE_VARS)?;
    let art = reduce::<Cost>(&f, variant)?;
    let k = art.budget();
    let opts = solve_options(Strategy::Enumerate)?;
    let decision = solve_decision(art.instance(), &opts)?;
    let best = solve_exact(art.instance(), &opts)?;
    let mut problems = Vec::new();

    println!(
        "variant={variant} n={} m={} k={k}",
        f.num_vars(),
        f.num_clauses()
    );
    let relation = match best.min_cost.cmp(&k) {
        std::cmp::Ordering::Equal => format!("={k}=k"),
        std::cmp::Ordering::Greater => format!(">{k}"),
        std::cmp::Ordering::Less => format!("<{k}"),
    };
    println!(
        "sat={} decision={decision} min_cost{relation}",
        model.is_some()
    );
    println!("min_cost_value={}", best.min_cost);
    if model.is_some() != decision {
        problems.push("satisfiability and decision disagree".to_string());
    }
    match (&model, best.min_cost == k) {
        (Some(_), false) => {
            problems.push(format!("satisfiable but min_cost={} != k", best.min_cost))
        }
        (None, _) if best.min_cost <= k => {
            problems.push(format!("unsatisfiable but min_cost={} <= k", best.min_cost))
        }
        _ => {}
    }

    if let Some(a) = &model {
        let forest = assignment_to_forest(&art, &f, a)?;
        let report = verify_forest(art.instance(), &forest);
        let cost = report
            .cost
            .map_or_else(|| "none".to_string(), |c| c.to_string());
        println!("certificate_valid={} certificate_cost={cost}", report.valid);
        if !report.valid || report.cost != Some(k) {
            problems.push(format!("certificate from model: {report}"));
        }
        match forest_to_assignment(&art, &forest) {
            Ok(back) if &back == a => println!("assignment_roundtrip=ok"),
            Ok(_) => problems.push("extracted assignment differs from the model".to_string()),
            Err(e) => problems.push(e.to_string()),
        }
        if best.min_cost == k {
            match forest_to_assignment(&art, &best.forest) {
                Ok(sol) if evaluate(&f, &sol)? => println!("solver_forest_model=ok"),
                Ok(_) => problems.push("optimal forest does not encode a model".to_string()),
                Err(e) => problems.push(e.to_string()),
            }
        }
    }

    if problems.is_empty() {
        println!("result=pass");
        Ok(0)
    } else {
        println!("result=FAIL");
        for p in &problems {
            println!("violation: {p}");
        }
        eprintln!("hmsf: equivalence violated for {}", input.display());
        Ok(EXIT_VIOLATION)
    }
}

fn cmd_check_metric(input: &Path) -> Result<u8, Failure> {
    let inst = read_instance(input)?;
    let g = inst.graph();
    let mut metric = true;
    for tree in 0..g.num_trees() {
        let bad = check_triangle_inequality(g, tree)
            .map_err(|e| Failure::new(graph_code(&e), e.to_string()))?;
        print!("index={tree} violations={}", bad.len());
        if let Some((a, b, c)) = bad.first() {
            print!(
                " example=({},{},{})",
                g.display_name(*a),
                g.display_name(*b),
                g.display_name(*c)
            );
        }
        println!();
        metric &= bad.is_empty();
    }
    println!("metric={metric}");
    Ok(if metric { 0 } else { EXIT_NO })
}

fn cmd_export_dot(input: &Path, output: Option<&Path>) -> Result<u8, Failure> {
    let inst = read_instance(input)?;
    let g = inst.graph();
    let dot = to_dot(g, |e| {
        style_of(classify_by_labels(g.label(e.u), g.label(e.v)))
    });
    emit(output, &dot)?;
    Ok(0)
}

fn cmd_gen(kind: GenKind) -> Result<u8, Failure> {
    match kind {
        GenKind::Cnf {
            vars,
            clauses,
            seed,
            output,
        } => {
            let f = random_formula_seeded(vars, clauses, seed)?;
            emit(output.as_deref(), &f.to_dimacs())?;
        }
        GenKind::Hgraph {
            params,
            seed,
            output,
        } => {
            let p = GraphParams {
                nodes: params.nodes,
                trees: params.trees,
                density: params.density,
                max_cost: params.max_cost,
                max_edges: params.max_edges,
            };
            let inst = random_instance_seeded(&p, seed)?;
            emit(output.as_deref(), &write_instance(&inst))?;
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Reduce {
            variant,
            input,
            output,
        } => cmd_reduce(variant, &input, &output),
        Command::Solve {
            input,
            decision,
            strategy,
            certificate,
        } => {
            let strategy = match strategy {
                StrategyArg::Enumerate => Strategy::Enumerate,
                StrategyArg::BranchAndBound => Strategy::BranchAndBound,
            };
            cmd_solve(&input, decision, strategy, certificate.as_deref())
        }
        Command::Sat { input } => cmd_sat(&input),
        Command::Verify {
            instance,
            certificate,
        } => cmd_verify(&instance, &certificate),
        Command::Roundtrip { variant, input } => cmd_roundtrip(variant, &input),
        Command::CheckMetric { input } => cmd_check_metric(&input),
        Command::ExportDot { input, output } => cmd_export_dot(&input, output.as_deref()),
        Command::Gen { kind } => cmd_gen(kind),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("hmsf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
