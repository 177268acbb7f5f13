//! Independent evaluators of the Sobolev-form and invariant-form
//! multiplicity conditions, typed directly from their statements.

#![allow(dead_code)]

use std::f64::consts::PI;

use multicrit_core::{ExampleId, ExampleParams, GuaranteedInterval};
use statrs::function::gamma::gamma;

/// Sharp Sobolev constant through the gamma function.
pub fn k_sharp(n: u32) -> f64 {
    let nf = f64::from(n);
    let omega = 2.0 * PI.powf((nf + 1.0) / 2.0) / gamma((nf + 1.0) / 2.0);
    4.0 / (nf * (nf - 2.0) * omega.powf(2.0 / nf))
}

/// Oracle interval: `(0,∞) ∩ [lower_closed, ∞) ∩ (gap_lower, ∞) ∩ (0, upper]`.
#[derive(Debug)]
pub struct Oracle {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

pub fn assemble(upper: f64, lower_closed: f64, gap_lower: f64) -> Oracle {
    let lo = 0f64.max(lower_closed).max(gap_lower);
    let strict = lo == 0.0 || (gap_lower >= lower_closed);
    Oracle {
        lo,
        hi: upper,
        empty: lo > upper || (lo == upper && strict),
    }
}

/// Sobolev-form conditions on an n-manifold, n > 4, typed from the statement:
/// α ≤ B₀,G₂; α ≥ n(n-4)/(n-2)² B₀; α > B₀,G₂ - [(A₂/A₁)^{2/(n-k)} - 1]
/// A₂^{-4/((n-k)(n-2))} K_{n-k}^{2/(n-2)} / (V^{2(n-2-k)/((n-k)(n-2))} K_n^{n/(n-2)})
/// (n(n-4)/(n-2)²)^{n/(n-2)} (max f/<f>)^{2(n-2-k)/((n-k)(n-2))}.
#[allow(clippy::too_many_arguments)]
pub fn oracle_sobolev(n: u32, k: u32, a1: f64, a2: f64, v: f64, b0g2: (f64, f64), b0: f64, r: f64) -> Oracle {
    let nf = f64::from(n);
    let m = f64::from(n - k);
    let c = nf * (nf - 4.0) / ((nf - 2.0) * (nf - 2.0));
    let e = 2.0 * (nf - 2.0 - f64::from(k)) / (m * (nf - 2.0));
    let bracket = (a2 / a1).powf(2.0 / m) - 1.0;
    let gap = bracket * a2.powf(-4.0 / (m * (nf - 2.0))) * k_sharp(n - k).powf(2.0 / (nf - 2.0))
        / (v.powf(e) * k_sharp(n).powf(nf / (nf - 2.0)))
        * c.powf(nf / (nf - 2.0))
        * r.powf(e);
    assemble(b0g2.0, c * b0, b0g2.1 - gap)
}

/// Invariant-form conditions, n - k > 4:
/// α ≤ B₀,G₂; α ≥ (n-k)(n-4-k)/(n-2-k)² B₀,G₂; α > B₀,G₂ - [(A₂/A₁)^{2/(n-k)} - 1]
/// A₂^{2/(n-k)}/(V^{2/(n-k)} K_{n-k}) ((n-k)(n-4-k)/(n-2-k)²)^{(n-k)/(n-2-k)} (max f/<f>)^{2/(n-k)}.
pub fn oracle_invariant(n: u32, k: u32, a1: f64, a2: f64, v: f64, b0g2: (f64, f64), r: f64) -> Oracle {
    let m = f64::from(n - k);
    let c = m * (m - 4.0) / ((m - 2.0) * (m - 2.0));
    let gap = ((a2 / a1).powf(2.0 / m) - 1.0) * a2.powf(2.0 / m) / (v.powf(2.0 / m) * k_sharp(n - k))
        * c.powf(m / (m - 2.0))
        * r.powf(2.0 / m);
    assemble(b0g2.0, c * b0g2.1, b0g2.1 - gap)
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn agrees(lib: &GuaranteedInterval, o: &Oracle, tol: f64) -> Result<(), String> {
    if lib.empty != o.empty {
        // Only tolerable when the oracle sits on the emptiness boundary.
        if rel(o.lo, o.hi) < tol {
            return Ok(());
        }
        return Err(format!("emptiness differs: lib {lib:?} oracle {o:?}"));
    }
    if o.empty {
        return Ok(());
    }
    if rel(lib.lo, o.lo) >= tol || rel(lib.hi, o.hi) >= tol {
        return Err(format!(
            "endpoints differ: lib [{}, {}] oracle [{}, {}]",
            lib.lo, lib.hi, o.lo, o.hi
        ));
    }
    Ok(())
}


pub fn omega(n: u32) -> f64 {
    let x = (f64::from(n) + 1.0) / 2.0;
    2.0 * PI.powf(x) / gamma(x)
}

/// Displayed interval `(lo, hi, lo_strict, hi_strict)` of each worked
/// configuration, typed from its statement.
pub fn example_closed_form(id: ExampleId, p: &ExampleParams) -> (f64, f64, bool, bool) {
    let nf = f64::from(p.n);
    match id {
        ExampleId::SphereFree => (nf * nf * (nf - 4.0) / (4.0 * (nf - 2.0)), nf * (nf - 2.0) / 4.0, false, false),
        ExampleId::CylinderRotations => (
            nf * (nf - 4.0) / (nf - 2.0).powi(2) * ((nf - 2.0).powi(2) / 4.0 + 1.0 / (4.0 * p.t * p.t)),
            (nf - 2.0).powi(2) / 4.0,
            false,
            false,
        ),
        ExampleId::CircleSphereSphere => (
            (nf - 3.0).powi(2) * (nf - 7.0) / (4.0 * (nf - 5.0)),
            ((nf - 3.0) * (nf - 5.0) / 4.0)
                .min((nf - 5.0) / (4.0 * (nf - 4.0)) * (2.0 / (p.b * p.b) + (nf - 6.0) * (nf - 7.0))),
            false,
            true,
        ),
        ExampleId::CylinderTriple => {
            let c = nf * (nf - 2.0) * omega(p.n).powf(2.0 / nf)
                / (4.0 * (2.0 * PI * p.t * omega(p.n - 1)).powf(2.0 / nf));
            let lo = ((nf - 2.0).powi(2) / 4.0 + p.a2 * p.a2 / (4.0 * p.t * p.t)
                - (p.a2.powf(2.0 / nf) - p.a1.powf(2.0 / nf)) * c)
                .max(p.a2.powf(2.0 / nf) * c);
            (lo, (nf - 2.0).powi(2) / 4.0, false, false)
        }
        ExampleId::Hopf => (3.0 / (4.0 * p.t.powf(2.0 / 3.0)), 0.75, false, true),
        ExampleId::CylinderOrbit => (
            (nf - 1.0) * (nf - 3.0) / (4.0 * p.t.powf(2.0 / (nf - 1.0))),
            (nf - 3.0).powi(2) / 4.0,
            false,
            true,
        ),
    }
}

/// Three admissible parameter points per configuration.
pub fn example_points(id: ExampleId) -> [ExampleParams; 3] {
    let d = ExampleParams::defaults(id);
    match id {
        ExampleId::SphereFree => [
            ExampleParams { n: 5, a1: 1.0, a2: 2.0, ..d },
            ExampleParams { n: 7, a1: 2.0, a2: 3.0, ..d },
            ExampleParams { n: 9, a1: 3.0, a2: 8.0, ..d },
        ],
        ExampleId::CylinderRotations => [
            ExampleParams { n: 5, t: 1.0, ..d },
            ExampleParams { n: 6, t: 0.5, ..d },
            ExampleParams { n: 8, t: 3.0, ..d },
        ],
        ExampleId::CircleSphereSphere => [
            ExampleParams { n: 10, a: 10.0, b: 0.28, ..d },
            ExampleParams { n: 11, a: 10.0, b: 0.25, ..d },
            ExampleParams { n: 12, a: 20.0, b: 0.2, ..d },
        ],
        ExampleId::CylinderTriple => [
            ExampleParams { n: 5, t: 40.0, a1: 1.0, a2: 2.0, ..d },
            ExampleParams { n: 6, t: 60.0, a1: 1.0, a2: 3.0, ..d },
            ExampleParams { n: 4, t: 30.0, a1: 2.0, a2: 3.0, ..d },
        ],
        ExampleId::Hopf => [
            ExampleParams { t: 1.5, ..d },
            ExampleParams { t: 8.0, ..d },
            ExampleParams { t: 100.0, ..d },
        ],
        ExampleId::CylinderOrbit => [
            ExampleParams { n: 5, t: 5.0, ..d },
            ExampleParams { n: 6, t: 20.0, ..d },
            ExampleParams { n: 8, t: 100.0, ..d },
        ],
    }
}
