//! Symmetry-reduced variational solver on a periodic 1-D grid.

mod diagnostics;
pub mod linalg;
mod minimize;
mod problem;

pub use diagnostics::{
    energy_separation, proof_chain_diagnostics, AuditVerdict, EnergyOrder, EnergySeparation,
    ProofChainAudit, AUDIT_RTOL,
};
pub use minimize::{
    constant_solution, minimize, minimize_from, problem_threshold, start_profiles,
    Classification, SolveReport, SolverConfig, CONSTANT_SPREAD, MIN_GRID, QUOTIENT_NOTE,
    THREADS_ENV,
};
pub use problem::ReducedProblem;
