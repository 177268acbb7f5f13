//! Existence thresholds, multiplicity conditions and the worked
//! configurations' α-intervals.

mod examples;
mod intervals;
mod profile;

pub use examples::{
    default_weight, example_bounds, example_dimensions, example_f_condition,
    example_interval, example_interval_unchecked, required_peak_ratio, ExampleBounds,
};
pub use intervals::{
    certainly_less, constant_solution_crossover, constant_weight_intervals, pairwise_separation,
    separation_interval_generic, separation_interval_holder, separation_interval_invariant,
    separation_interval_sobolev, ConditionStatus, ConditionVerdict, ConstantWeightIntervals,
    GapStrictness, GenericIneqParams, GuaranteedInterval, OrbitGroup, PairVerdict,
    SeparationData, LABEL_DOUBLE_PRECONDITION, LABEL_GAP, LABEL_HOLDER_GAP, LABEL_MULTIPLIER,
    LABEL_TRIPLE_PRECONDITION, LABEL_UPPER,
};
pub use profile::FProfile;

use serde::{Deserialize, Serialize};

use crate::constants::Dimensions;
use crate::error::{Error, Result};
use crate::geometry::GroupActionSpec;

/// `A^{2/(n-k)} / (K_{n-k} (max f)^{2/2♯})`. An invariant test function whose
/// quotient lies strictly below this value yields a minimizing solution.
pub fn existence_threshold(dims: &Dimensions, orbit_volume: f64, f: &FProfile) -> Result<f64> {
    if !(orbit_volume > 0.0 && orbit_volume.is_finite()) {
        return Err(Error::domain(format!("orbit volume must be positive, got {orbit_volume}")));
    }
    f.validate()?;
    let m = f64::from(dims.reduced());
    Ok(orbit_volume.powf(2.0 / m) / (dims.sobolev() * f.f_max.powf(2.0 / dims.two_sharp())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistenceBound {
    /// `(n-4-k) Δf(x₀) = 0`.
    pub flatness_ok: bool,
    /// Solutions exist for every `α < alpha_sup` (given `flatness_ok`).
    pub alpha_sup: f64,
}

/// Test-function existence criterion at the minimal orbit:
/// `α < (n-2-k)/(4(n-1-k)) · (3Δṽ_H/A + S)` together with flatness of f.
pub fn existence_alpha_bound(
    dims: &Dimensions,
    action: &GroupActionSpec,
    f: &FProfile,
) -> Result<ExistenceBound> {
    if dims.reduced() < 4 {
        return Err(Error::hypothesis(format!(
            "the test-function existence criterion requires n - k >= 4, got {}",
            dims.reduced()
        )));
    }
    if action.k != dims.k() {
        return Err(Error::hypothesis(format!(
            "action '{}' has minimal orbit dimension {}, equation uses k = {}",
            action.name,
            action.k,
            dims.k()
        )));
    }
    f.validate()?;
    let m = f64::from(dims.reduced());
    let alpha_sup = (m - 2.0) / (4.0 * (m - 1.0))
        * (3.0 * action.vh_laplacian.lower_value() / action.orbit_volume
            + action.quotient_scal_lower);
    Ok(ExistenceBound {
        flatness_ok: (m - 4.0) * f.laplacian_at_peak == 0.0,
        alpha_sup,
    })
}
