//! Reduction engineering toolkit for the heterogeneous minimum spanning
//! forest problem (HMSF).
//!
//! The crate builds the 3-SAT gadget graph in three flavours (raw gadget,
//! metric-closure completion, and a triangle-inequality variant), translates
//! witnesses between satisfying assignments and budget-respecting spanning
//! forests, and checks the whole construction against exact solvers on both
//! sides:
//!
//! * [`cnf`]: 3-CNF formulas, DIMACS I/O, brute-force and DPLL satisfiability.
//! * [`hgraph`]: heterogeneous graphs, spanning forests, the polynomial
//!   certificate verifier, metric closure, text formats and DOT export.
//! * [`reduction`]: the gadget construction and certificate translation.
//! * [`solver`]: exact HMSF optimisation by partition enumeration and a
//!   brute-force edge-subset oracle.
//! * [`generate`]: seeded random formulas and graphs for sweeps.
//!
//! Graph-side types are generic over the cost scalar ([`Weight`]); the
//! aliases below pin the default `u64` instantiation.

pub mod cnf;
pub mod generate;
pub mod hgraph;
pub mod reduction;
pub mod solver;
mod weight;

pub use weight::Weight;

/// Default edge cost scalar.
pub type Cost = u64;
/// Heterogeneous graph with `u64` costs.
pub type Graph = hgraph::HeteroGraph<Cost>;
/// HMSF instance with `u64` costs.
pub type HmsfInstance = hgraph::Instance<Cost>;
/// Verifier output for `u64` instances.
pub type Report = hgraph::VerificationReport<Cost>;
/// Reduction output with `u64` costs.
pub type Artifacts = reduction::ReductionArtifacts<Cost>;
/// Solver output with `u64` costs.
pub type Solution = solver::SolveResult<Cost>;
