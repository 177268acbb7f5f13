//! Existence thresholds and multiplicity α-intervals for
//! `Δu + αu = f u^p` on compact manifolds with isometric group actions,
//! plus two numerical laboratories: a symmetry-reduced 1-D variational
//! solver and a small-ε expansion fitter for concentrating test functions.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod best_constants;
pub mod conditions;
pub mod constants;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod solver;

pub use best_constants::{BoundSource, SourcedBound};
pub use conditions::{
    existence_threshold, example_interval, ConditionStatus, FProfile, GapStrictness,
    GenericIneqParams, GuaranteedInterval, SeparationData,
};
pub use constants::{sobolev_constant, sphere_volume, ConstantBound, Dimensions, EquationParams};
pub use error::{Error, Result};
pub use expansion::{fit_and_compare, rayleigh_quotient, test_function, ExpansionConfig, ExpansionFit};
pub use geometry::{ExampleId, ExampleParams, GroupActionSpec, ManifoldModel, ManifoldSpec};
pub use solver::{minimize, Classification, ReducedProblem, SolveReport, SolverConfig};
