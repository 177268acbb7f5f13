//! Two-sided estimates for the second best constant `B₀` (and its invariant
//! version `B₀,G`) of the optimal Sobolev inequality.

use serde::{Deserialize, Serialize};

use crate::constants::{sobolev_constant, ConstantBound, Dimensions};
use crate::error::{Error, Result};
use crate::geometry::{GroupActionSpec, ManifoldSpec};

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Exact value on the round sphere.
    SphereExact,
    /// General lower bound from orbit volume and quotient curvature.
    OrbitLower,
    /// Two-sided estimate on `S¹(t) × S^{n-1}`.
    CircleSphere,
    /// Two-sided estimate on a free quotient of a sphere.
    QuotientSphere,
    /// Transfer from the quotient by principal orbits of constant volume.
    PrincipalTransfer,
}

/// A bound together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourcedBound {
    #[serde(flatten)]
    pub bound: ConstantBound,
    pub source: BoundSource,
    /// Built from a curvature lower bound or a sign only, so it may be loose.
    pub conservative: bool,
}

impl SourcedBound {
    pub fn new(bound: ConstantBound, source: BoundSource) -> Self {
        Self {
            bound,
            source,
            conservative: false,
        }
    }
}

/// `B₀(Sⁿ) = n(n-2)/4`.
pub fn b0_sphere(n: u32) -> Result<ConstantBound> {
    if n < 3 {
        return Err(Error::domain(format!("b0 on the sphere needs n >= 3, got {n}")));
    }
    let n = f64::from(n);
    Ok(ConstantBound::exact(n * (n - 2.0) / 4.0))
}

/// Lower bound for `B₀,G` from orbit data:
/// `max{ (A/V)^{2/(n-k)} / K_{n-k}, (n-2-k)/(4(n-k-1)) · (S + 3Δṽ_H/A) }`.
///
/// Established for `n - k > 4`; anything else is a hypothesis error.
pub fn b0_lower_general(
    dims: &Dimensions,
    manifold: &ManifoldSpec,
    action: &GroupActionSpec,
) -> Result<f64> {
    if dims.reduced() <= 4 {
        return Err(Error::hypothesis(format!(
            "general lower bound for B0,G needs n - k > 4, got n - k = {}",
            dims.reduced()
        )));
    }
    b0_lower_general_low_codim(dims, manifold, action)
}

/// Same formula, admitted down to `n - k > 2`. The constant-weight
/// configurations with one-dimensional orbits on four- and five-manifolds
/// consume it there.
pub fn b0_lower_general_low_codim(
    dims: &Dimensions,
    manifold: &ManifoldSpec,
    action: &GroupActionSpec,
) -> Result<f64> {
    if action.k != dims.k() {
        return Err(Error::hypothesis(format!(
            "action '{}' has minimal orbit dimension {}, equation uses k = {}",
            action.name,
            action.k,
            dims.k()
        )));
    }
    if manifold.dim != dims.n() {
        return Err(Error::hypothesis(format!(
            "manifold dimension {} differs from equation dimension {}",
            manifold.dim,
            dims.n()
        )));
    }
    let m = f64::from(dims.reduced());
    let k_m = sobolev_constant(dims.reduced())?;
    let volume_term = (action.orbit_volume / manifold.volume).powf(2.0 / m) / k_m;
    let curvature_term = (m - 2.0) / (4.0 * (m - 1.0))
        * (action.quotient_scal_lower + 3.0 * action.vh_laplacian.lower_value() / action.orbit_volume);
    Ok(volume_term.max(curvature_term))
}

/// `[(n-2)²/4, (n-2)²/4 + 1/(4t²)]` for `B₀(S¹(t) × S^{n-1})`.
pub fn b0_bounds_circle_sphere(t: f64, n: u32) -> Result<ConstantBound> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be positive, got {t}")));
    }
    if n < 3 {
        return Err(Error::domain(format!("n must be >= 3, got {n}")));
    }
    let base = (f64::from(n) - 2.0).powi(2) / 4.0;
    ConstantBound::new(base, base + 1.0 / (4.0 * t * t))
}

/// `[A^{2/n} n(n-2)/4, (1 + A²/4)(n+1)/2 - 1 + n(n-2)/4]` for `B₀(Sⁿ/Γ)`,
/// `Γ` cyclic of order `A` acting freely.
pub fn b0_bounds_quotient_sphere(n: u32, order: u32) -> Result<ConstantBound> {
    if n < 3 {
        return Err(Error::domain(format!("n must be >= 3, got {n}")));
    }
    if order < 1 {
        return Err(Error::domain("group order must be >= 1"));
    }
    let nf = f64::from(n);
    let a = f64::from(order);
    let sphere = nf * (nf - 2.0) / 4.0;
    let lo = a.powf(2.0 / nf) * sphere;
    let hi = (1.0 + a * a / 4.0) * ((nf + 1.0) / 2.0) - 1.0 + sphere;
    ConstantBound::new(lo, hi)
}

/// `B₀,G(M) = B₀(M/G)` when every orbit is principal of constant volume.
pub fn transfer_finite_principal(
    quotient: ConstantBound,
    action: &GroupActionSpec,
) -> Result<ConstantBound> {
    if !action.orbits_principal_constant_volume {
        return Err(Error::hypothesis(format!(
            "action '{}' does not have principal orbits of constant volume",
            action.name
        )));
    }
    Ok(quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{OrbitHypothesis, VolumeLaplacian};

    fn trivial_action(volume: f64) -> GroupActionSpec {
        GroupActionSpec {
            name: "Id".into(),
            k: 0,
            orbit_volume: volume,
            orbits_principal_constant_volume: true,
            hypothesis: OrbitHypothesis::FinitePrincipal,
            quotient_scal_lower: 0.0,
            vh_laplacian: VolumeLaplacian::Zero,
        }
    }

    #[test]
    fn sphere_values() {
        assert_eq!(b0_sphere(3).unwrap(), ConstantBound::exact(0.75));
        assert_eq!(b0_sphere(5).unwrap(), ConstantBound::exact(3.75));
        assert_eq!(b0_sphere(10).unwrap(), ConstantBound::exact(20.0));
        assert!(b0_sphere(2).is_err());
    }

    #[test]
    fn circle_sphere_values() {
        assert_eq!(b0_bounds_circle_sphere(1.0, 4).unwrap(), ConstantBound::new(1.0, 1.25).unwrap());
        assert_eq!(
            b0_bounds_circle_sphere(2.0, 6).unwrap(),
            ConstantBound::new(4.0, 4.0 + 1.0 / 16.0).unwrap()
        );
        assert!(b0_bounds_circle_sphere(1e8, 5).unwrap().width() < 1e-16);
        assert!(b0_bounds_circle_sphere(0.0, 5).is_err());
    }

    #[test]
    fn quotient_sphere_trivial_group_matches_sphere() {
        for n in 3..12 {
            assert_eq!(
                b0_bounds_quotient_sphere(n, 1).unwrap().lo(),
                b0_sphere(n).unwrap().lo()
            );
        }
    }

    #[test]
    fn trivial_action_gives_inverse_sobolev() {
        let m = ManifoldSpec::sphere(7).unwrap();
        let a = trivial_action(m.volume);
        let d = Dimensions::new(7, 0).unwrap();
        let lower = b0_lower_general(&d, &m, &a).unwrap();
        assert!((lower - 1.0 / sobolev_constant(7).unwrap()).abs() < 1e-12 * lower);
    }

    #[test]
    fn general_lower_bound_gates_codimension() {
        let m = ManifoldSpec::sphere(4).unwrap();
        let a = trivial_action(m.volume);
        let d = Dimensions::new(4, 0).unwrap();
        assert!(matches!(b0_lower_general(&d, &m, &a), Err(Error::Hypothesis(_))));
        assert!(b0_lower_general_low_codim(&d, &m, &a).is_ok());
    }

    #[test]
    fn transfer_requires_principal_orbits() {
        let mut a = trivial_action(1.0);
        let b = b0_sphere(3).unwrap();
        assert_eq!(transfer_finite_principal(b, &a).unwrap(), b);
        a.orbits_principal_constant_volume = false;
        assert!(transfer_finite_principal(b, &a).is_err());
    }
}
