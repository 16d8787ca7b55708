//! Multi-objective Boolean optimization through minimal correction subsets.
//!
//! Objectives are encoded in unary: for every threshold `d` of objective `k`
//! a literal `y[k,d]` holds exactly when `f_k(x) < d`. Enumerating the minimal
//! correction subsets of the unit soft clauses `(y[k,d])` then yields the
//! Pareto front (complete threshold domains) or a `(1+eps)`-approximation set
//! together with a lower bound set (interval or coefficient approximations).
//!
//! Module map:
//!
//! - [`model`]: literals, linear expressions, instances, points, dominance.
//! - [`sat`]: incremental CDCL backend with assumptions.
//! - [`encode`]: pseudo-Boolean constraints and objective ladders to CNF.
//! - [`mcs`]: single MCS extraction (CLD).
//! - [`approx`]: threshold domains and coefficient rounding.
//! - [`engine`]: the enumeration drivers.
//! - [`quality`]: epsilon indicator and hypervolume.
//! - [`oracle`]: brute-force ground truth for small instances.
//! - [`io`]: `.pbmo` instances, benchmark generation, result serialization.

pub mod approx;
pub mod encode;
pub mod engine;
pub mod io;
pub mod mcs;
pub mod model;
pub mod oracle;
pub mod quality;
pub mod ratio;
pub mod sat;

pub use approx::{approx_coefficients, compute_domain, CoeffApproxMap, Domain};
pub use engine::{
    core_solve, enumerate_efficient_set, intre_solve, mcs_approx, ApproxResult, EngineError,
    IterationTrace, RatioSchedule, RunStatus, SolveOptions,
};
pub use model::{
    nondominated_filter, Instance, LinearExpr, Lit, ModelError, PbConstraint, Point,
    SolutionRecord, Term,
};
pub use ratio::Ratio;
pub use sat::{Budget, CdclSolver, ClauseSink, Cnf, SatSolver, SolveResult};
