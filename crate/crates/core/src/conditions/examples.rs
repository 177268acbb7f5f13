//! The six worked configurations: their best-constant estimates, weight
//! conditions and the α-intervals on which multiplicity is guaranteed.

use serde::{Deserialize, Serialize};

use crate::best_constants::{
    b0_bounds_circle_sphere, b0_bounds_quotient_sphere, b0_lower_general,
    b0_lower_general_low_codim, b0_sphere, transfer_finite_principal, BoundSource, SourcedBound,
};
use crate::constants::{sobolev_constant, ConstantBound, Dimensions};
use crate::error::{Error, Result};
use crate::geometry::{
    example_configuration, example_configuration_unchecked, ExampleConfiguration, ExampleId,
    ExampleParams,
};

use super::intervals::{
    constant_weight_intervals, separation_interval_generic, ConditionStatus, ConditionVerdict,
    GapStrictness, GenericIneqParams, GuaranteedInterval, SeparationData,
};
use super::profile::FProfile;
use super::existence_alpha_bound;

/// Best-constant estimates of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleBounds {
    /// `B₀(M)`, when the configuration uses it.
    pub b0_manifold: Option<SourcedBound>,
    pub b0g1: SourcedBound,
    pub b0g2: SourcedBound,
}

pub fn example_dimensions(id: ExampleId, params: &ExampleParams) -> Result<Dimensions> {
    let k = match id {
        ExampleId::SphereFree | ExampleId::CylinderRotations | ExampleId::CylinderTriple => 0,
        ExampleId::CircleSphereSphere => 3,
        ExampleId::Hopf | ExampleId::CylinderOrbit => 1,
    };
    Dimensions::new(params.n, k)
}

fn cardinality(a: f64) -> Result<u32> {
    if a >= 1.0 && a.fract() == 0.0 && a <= f64::from(u32::MAX) {
        Ok(a as u32)
    } else {
        Err(Error::precondition(format!("group cardinality must be a positive integer, got {a}")))
    }
}

fn transferred(
    quotient: ConstantBound,
    action: &crate::geometry::GroupActionSpec,
    source: BoundSource,
) -> Result<SourcedBound> {
    Ok(SourcedBound::new(transfer_finite_principal(quotient, action)?, source))
}

fn orbit_lower(dims: &Dimensions, config: &ExampleConfiguration, strict: bool) -> Result<SourcedBound> {
    let lower = if strict {
        b0_lower_general(dims, &config.manifold, &config.g1)?
    } else {
        b0_lower_general_low_codim(dims, &config.manifold, &config.g1)?
    };
    Ok(SourcedBound {
        bound: ConstantBound::at_least(lower),
        source: BoundSource::OrbitLower,
        conservative: true,
    })
}

pub fn example_bounds(config: &ExampleConfiguration) -> Result<ExampleBounds> {
    let p = &config.params;
    let n = p.n;
    let dims = example_dimensions(config.id, p)?;
    Ok(match config.id {
        ExampleId::SphereFree => ExampleBounds {
            b0_manifold: Some(SourcedBound::new(b0_sphere(n)?, BoundSource::SphereExact)),
            b0g1: transferred(
                b0_bounds_quotient_sphere(n, cardinality(p.a1)?)?,
                &config.g1,
                BoundSource::QuotientSphere,
            )?,
            b0g2: transferred(
                b0_bounds_quotient_sphere(n, cardinality(p.a2)?)?,
                &config.g2,
                BoundSource::QuotientSphere,
            )?,
        },
        ExampleId::CylinderRotations | ExampleId::CylinderTriple => ExampleBounds {
            b0_manifold: Some(SourcedBound::new(
                b0_bounds_circle_sphere(p.t, n)?,
                BoundSource::CircleSphere,
            )),
            b0g1: transferred(
                b0_bounds_circle_sphere(p.t / p.a1, n)?,
                &config.g1,
                BoundSource::CircleSphere,
            )?,
            b0g2: transferred(
                b0_bounds_circle_sphere(p.t / p.a2, n)?,
                &config.g2,
                BoundSource::CircleSphere,
            )?,
        },
        ExampleId::CircleSphereSphere => ExampleBounds {
            b0_manifold: None,
            b0g1: orbit_lower(&dims, config, true)?,
            b0g2: transferred(b0_sphere(n - 3)?, &config.g2, BoundSource::PrincipalTransfer)?,
        },
        ExampleId::Hopf => ExampleBounds {
            b0_manifold: Some(SourcedBound::new(
                b0_bounds_circle_sphere(p.t, 4)?,
                BoundSource::CircleSphere,
            )),
            b0g1: orbit_lower(&dims, config, false)?,
            b0g2: transferred(b0_sphere(3)?, &config.g2, BoundSource::PrincipalTransfer)?,
        },
        ExampleId::CylinderOrbit => ExampleBounds {
            b0_manifold: Some(SourcedBound::new(
                b0_bounds_circle_sphere(p.t, n)?,
                BoundSource::CircleSphere,
            )),
            b0g1: orbit_lower(&dims, config, false)?,
            b0g2: transferred(b0_sphere(n - 1)?, &config.g2, BoundSource::PrincipalTransfer)?,
        },
    })
}

/// Flatness the weight must have at its peak for the configuration.
fn check_flatness(id: ExampleId, n: u32, f: &FProfile) -> Result<()> {
    match id {
        ExampleId::SphereFree if f.vanishing_order < n - 3 => Err(Error::precondition(format!(
            "sphere-free needs the derivatives of f at its peak to vanish through order n-3 = {}, \
             got {}",
            n - 3,
            f.vanishing_order
        ))),
        ExampleId::CylinderRotations if f.vanishing_order < n - 2 => {
            Err(Error::precondition(format!(
                "cylinder-rotations needs the derivatives of f at its peak to vanish through order \
                 n-2 = {}, got {}",
                n - 2,
                f.vanishing_order
            )))
        }
        ExampleId::CircleSphereSphere if f.laplacian_at_peak != 0.0 => Err(Error::precondition(
            "circle-sphere-sphere needs the Laplacian of f to vanish at its peak",
        )),
        ExampleId::CylinderTriple | ExampleId::Hopf | ExampleId::CylinderOrbit
            if !f.is_constant() =>
        {
            Err(Error::precondition(format!("{id} fixes the weight to a constant")))
        }
        _ => Ok(()),
    }
}

/// Smallest `max f / <f>` for which the configuration's weight condition
/// holds; `None` when the configuration has no weight condition.
pub fn required_peak_ratio(id: ExampleId, params: &ExampleParams) -> Result<Option<f64>> {
    let config = example_configuration(id, params)?;
    required_peak_ratio_for(&config)
}

fn required_peak_ratio_for(config: &ExampleConfiguration) -> Result<Option<f64>> {
    let p = &config.params;
    let nf = f64::from(p.n);
    let bounds = example_bounds(config)?;
    let ratio = match config.id {
        ExampleId::SphereFree => {
            // Gap condition at the lower end of the multiplier interval.
            let lower_end = nf * nf * (nf - 4.0) / (4.0 * (nf - 2.0));
            let q = (bounds.b0g2.bound.hi() - lower_end)
                * ((nf - 2.0).powi(2) / (nf * (nf - 4.0))).powf(nf / (nf - 2.0))
                * 4.0
                * p.a2.powf(4.0 / (nf * (nf - 2.0)))
                / (nf * (nf - 2.0))
                / ((p.a2 / p.a1).powf(2.0 / nf) - 1.0);
            q.max(0.0).powf(nf / 2.0)
        }
        ExampleId::CylinderRotations => {
            // Gap at least B₀,G₂ itself, so the gap condition is vacuous.
            let q = bounds.b0g2.bound.hi()
                * sobolev_constant(p.n)?
                * p.a2.powf(4.0 / (nf * (nf - 2.0)))
                * config.manifold.volume.powf(2.0 / nf)
                / ((p.a2 / p.a1).powf(2.0 / nf) - 1.0)
                * ((nf - 2.0).powi(2) / (nf * (nf - 4.0))).powf(nf / (nf - 2.0));
            q.powf(nf / 2.0)
        }
        ExampleId::CircleSphereSphere => {
            let r = 4.0 * p.a * p.b * p.b;
            (r.powf(2.0 / (nf - 3.0)) - 1.0).powf(-(nf - 3.0) / 2.0)
                * ((nf - 5.0).powi(2) / ((nf - 3.0) * (nf - 7.0)))
                    .powf((nf - 3.0).powi(2) / (2.0 * (nf - 5.0)))
        }
        ExampleId::CylinderTriple | ExampleId::Hopf | ExampleId::CylinderOrbit => return Ok(None),
    };
    Ok(Some(ratio))
}

/// The configuration's sufficient condition on the weight, making the
/// orbit-gap condition automatic on the interval.
pub fn example_f_condition(id: ExampleId, params: &ExampleParams, f: &FProfile) -> Result<bool> {
    f.validate()?;
    let config = example_configuration(id, params)?;
    if id.constant_weight() {
        return Ok(true);
    }
    check_flatness(id, params.n, f)?;
    Ok(match required_peak_ratio_for(&config)? {
        Some(r) => f.peak_ratio() >= r,
        None => true,
    })
}

/// A weight meeting the configuration's requirements: `f ≡ 1` when the
/// weight is fixed or unconstrained, otherwise a flat-peaked weight with
/// `<f> = 1`, `min f = 1/2` and peak ratio twice the required one.
pub fn default_weight(id: ExampleId, params: &ExampleParams) -> Result<FProfile> {
    let config = example_configuration_unchecked(id, params)?;
    match required_peak_ratio_for(&config)? {
        Some(r) if r > 1.0 => FProfile::new((2.0 * r).ceil(), 0.5, 1.0, 0.0, params.n),
        _ => FProfile::constant(1.0),
    }
}

/// The guaranteed multiplicity interval of a worked configuration, with
/// its parameter window enforced.
pub fn example_interval(
    id: ExampleId,
    params: &ExampleParams,
    f: &FProfile,
) -> Result<GuaranteedInterval> {
    let config = example_configuration(id, params)?;
    interval_for(&config, f)
}

/// Same composition with the parameter window unchecked; outside the window
/// the existence and multiplicity constraints conflict and the result comes
/// out empty.
pub fn example_interval_unchecked(
    id: ExampleId,
    params: &ExampleParams,
    f: &FProfile,
) -> Result<GuaranteedInterval> {
    let config = example_configuration_unchecked(id, params)?;
    interval_for(&config, f)
}

fn existence_upper(
    dims: &Dimensions,
    config: &ExampleConfiguration,
    f: &FProfile,
    endpoint_included: bool,
) -> Result<GuaranteedInterval> {
    let mut out = GuaranteedInterval::positive_half_line();
    for (label, action) in [("existence G1", &config.g1), ("existence G2", &config.g2)] {
        let e = existence_alpha_bound(dims, action, f)?;
        if !e.flatness_ok {
            return Err(Error::precondition(format!(
                "{label}: (n-4-k) * Laplacian of f at the peak must vanish"
            )));
        }
        out.lower_upper(e.alpha_sup, !endpoint_included);
        out.push(ConditionVerdict::new(
            format!("{label}: alpha < (n-2-k)/(4(n-1-k)) (3 Lap v_H/A + S)"),
            ConditionStatus::Satisfied,
            Some(e.alpha_sup),
        ));
    }
    Ok(out)
}

fn interval_for(config: &ExampleConfiguration, f: &FProfile) -> Result<GuaranteedInterval> {
    f.validate()?;
    let id = config.id;
    let p = &config.params;
    let dims = example_dimensions(id, p)?;
    check_flatness(id, p.n, f)?;
    let bounds = example_bounds(config)?;
    let volume = config.manifold.volume;
    let data = SeparationData {
        a1: config.g1.orbit_volume,
        a2: config.g2.orbit_volume,
        volume,
        b0g2: bounds.b0g2.bound,
    };

    let mut out = match id {
        ExampleId::SphereFree | ExampleId::CylinderRotations | ExampleId::CircleSphereSphere => {
            let gen = if id == ExampleId::CircleSphereSphere {
                GenericIneqParams::invariant(&dims, data.a2, &data.b0g2)?
            } else {
                let b0m = bounds
                    .b0_manifold
                    .expect("critical configurations carry B0(M)")
                    .bound;
                GenericIneqParams::sobolev(p.n, &b0m)?
            };
            let multiplicity =
                separation_interval_generic(&dims, &gen, &data, f, GapStrictness::Relaxed)?;
            // At the endpoint, existence for the critical configurations comes
            // from the prescribed-curvature results under the flatness
            // assumption; for the overcritical one it stays strict.
            let existence = existence_upper(&dims, config, f, id != ExampleId::CircleSphereSphere)?;
            let mut out = multiplicity.intersect(&existence);
            if let Some(r) = required_peak_ratio_for(config)? {
                out.push(ConditionVerdict::new(
                    "max f / <f> >= required ratio",
                    if f.peak_ratio() >= r {
                        ConditionStatus::Satisfied
                    } else {
                        ConditionStatus::Unsatisfiable
                    },
                    Some(r),
                ));
            }
            out
        }
        ExampleId::CylinderTriple | ExampleId::Hopf | ExampleId::CylinderOrbit => {
            let cw = constant_weight_intervals(
                &dims,
                data.a1,
                data.a2,
                volume,
                &bounds.b0g1.bound,
                &bounds.b0g2.bound,
            )?;
            if id == ExampleId::CylinderTriple {
                // Both groups reach the Yamabe value at the right end, where
                // existence is known; the interval is closed there.
                let mut t = cw.triple;
                if t.hi == bounds.b0g1.bound.lo().min(bounds.b0g2.bound.lo()) && !t.empty {
                    t.hi_strict = false;
                }
                t
            } else {
                cw.double
            }
        }
    };
    out.push(ConditionVerdict::new(
        "B0,G1 lower estimate",
        ConditionStatus::Satisfied,
        Some(bounds.b0g1.bound.lo()),
    ));
    Ok(out)
}
