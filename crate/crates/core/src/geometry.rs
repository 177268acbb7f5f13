//! Manifolds, isometry-group orbit data and the curvature comparison bounds
//! used to feed the second-best-constant estimates.
//!
//! Orbit hypotheses are declared per configuration, not derived: each worked
//! configuration below records what was established for it by hand.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::sphere_volume;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ManifoldModel {
    /// Round `S^n` of the given radius.
    Sphere { n: u32, radius: f64 },
    /// `S¹(t) × S^{n-1}` with the product of round metrics.
    CircleTimesSphere { t: f64, n: u32 },
    /// `S¹(a) × S²(b) × S^{n-3}`.
    CircleSphereSphere { a: f64, b: f64, n: u32 },
    /// `S^n / Γ` for a group `Γ` of the given order acting freely.
    QuotientSphere { n: u32, order: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub model: ManifoldModel,
    pub volume: f64,
    pub dim: u32,
}

impl ManifoldSpec {
    pub fn new(model: ManifoldModel) -> Result<Self> {
        let (dim, volume) = match model {
            ManifoldModel::Sphere { n, radius } => {
                positive("radius", radius)?;
                (n, sphere_volume(n)? * radius.powi(n as i32))
            }
            ManifoldModel::CircleTimesSphere { t, n } => {
                positive("t", t)?;
                check_dim(n, 3)?;
                (n, 2.0 * PI * t * sphere_volume(n - 1)?)
            }
            ManifoldModel::CircleSphereSphere { a, b, n } => {
                positive("a", a)?;
                positive("b", b)?;
                check_dim(n, 4)?;
                (n, 2.0 * PI * a * 4.0 * PI * b * b * sphere_volume(n - 3)?)
            }
            ManifoldModel::QuotientSphere { n, order } => {
                if order == 0 {
                    return Err(Error::domain("group order must be at least 1"));
                }
                (n, sphere_volume(n)? / f64::from(order))
            }
        };
        check_dim(dim, 3)?;
        Ok(Self { model, volume, dim })
    }

    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(ManifoldModel::Sphere { n, radius: 1.0 })
    }

    pub fn circle_times_sphere(t: f64, n: u32) -> Result<Self> {
        Self::new(ManifoldModel::CircleTimesSphere { t, n })
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_dim(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::domain(format!("dimension must be >= {min}, got {n}")));
    }
    Ok(())
}

/// Which orbit assumption is known to hold for a group action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitHypothesis {
    /// All orbits principal; a normal subgroup `H = G` realises the minimal orbit.
    H1,
    /// A normal subgroup `H` with principal orbits attains its maximal orbit
    /// volume on the minimal `G`-orbit.
    H2,
    /// Finite group acting freely: orbits are points, volume = cardinality.
    FinitePrincipal,
}

/// What is known about `Δṽ_H` at the quotient point of the minimal orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum VolumeLaplacian {
    Zero,
    /// Only the sign is known; the value itself is not available.
    NonNegative,
    Value(f64),
}

impl VolumeLaplacian {
    /// Largest value that is certainly `≤ Δṽ_H`.
    pub fn lower_value(&self) -> f64 {
        match self {
            VolumeLaplacian::Zero | VolumeLaplacian::NonNegative => 0.0,
            VolumeLaplacian::Value(v) => *v,
        }
    }
}

/// Orbit data of one isometry group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupActionSpec {
    pub name: String,
    /// Minimal orbit dimension.
    pub k: u32,
    /// Minimal volume among orbits of dimension `k`.
    pub orbit_volume: f64,
    pub orbits_principal_constant_volume: bool,
    pub hypothesis: OrbitHypothesis,
    /// Proven lower bound for the quotient scalar curvature at the minimal orbit.
    pub quotient_scal_lower: f64,
    pub vh_laplacian: VolumeLaplacian,
}

impl GroupActionSpec {
    pub fn validate(&self, n: u32) -> Result<()> {
        positive("orbit volume", self.orbit_volume)?;
        if self.k + 2 >= n {
            return Err(Error::hypothesis(format!(
                "{}: minimal orbit dimension {} leaves n - k <= 2 for n = {n}",
                self.name, self.k
            )));
        }
        if self.orbits_principal_constant_volume && self.hypothesis == OrbitHypothesis::H2 {
            return Err(Error::hypothesis(format!(
                "{}: principal constant-volume orbits must be declared H1 or finite-principal",
                self.name
            )));
        }
        Ok(())
    }
}

/// O'Neill comparison for a quotient by principal orbits of dimension `k` in a
/// manifold of constant sectional curvature: `S ≥ K (N-k)(N-k-1)`.
pub fn oneill_scal_lower(n_total: u32, k: u32, sectional: f64) -> Result<f64> {
    if k >= n_total {
        return Err(Error::domain(format!(
            "orbit dimension {k} must be below total dimension {n_total}"
        )));
    }
    let m = f64::from(n_total - k);
    Ok(sectional * m * (m - 1.0))
}

/// Quotient scalar curvature bound on `V × S^{r1+r2-1}` acted on by
/// `O(r1) × O(r2)` on the sphere factor: `S ≥ S_V + r1(r1-1)`.
pub fn product_scal_lower(s_base: f64, r1: u32, r2: u32) -> Result<f64> {
    if r2 < 1 || r1 < r2 {
        return Err(Error::precondition(format!(
            "product bound needs r1 >= r2 >= 1, got r1 = {r1}, r2 = {r2}"
        )));
    }
    let r = f64::from(r1);
    Ok(s_base + r * (r - 1.0))
}

/// Scalar curvature of a round 2-sphere of radius `b`.
pub fn two_sphere_scal(b: f64) -> f64 {
    2.0 / (b * b)
}

/// The six worked configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleId {
    /// Odd-dimensional sphere with two finite free groups; critical equation.
    SphereFree,
    /// `S¹(t) × S^{n-1}` with finite rotation groups on the circle; critical.
    CylinderRotations,
    /// `S¹(a) × S²(b) × S^{n-3}` with minimal orbits of dimension 3.
    CircleSphereSphere,
    /// `S¹(t) × S^{n-1}`, finite rotation groups, `f ≡ 1`, three solutions.
    CylinderTriple,
    /// `S¹(t) × S³` with the Hopf action against the circle rotations.
    Hopf,
    /// `S¹(t) × S^{n-1}` with non-principal `O(n-2) × O(2)` orbits.
    CylinderOrbit,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] = [
        ExampleId::SphereFree,
        ExampleId::CylinderRotations,
        ExampleId::CircleSphereSphere,
        ExampleId::CylinderTriple,
        ExampleId::Hopf,
        ExampleId::CylinderOrbit,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleId::SphereFree => "sphere-free",
            ExampleId::CylinderRotations => "cylinder-rotations",
            ExampleId::CircleSphereSphere => "circle-sphere-sphere",
            ExampleId::CylinderTriple => "cylinder-triple",
            ExampleId::Hopf => "hopf",
            ExampleId::CylinderOrbit => "cylinder-orbit",
        }
    }

    /// Parameters that the configuration actually reads.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            ExampleId::SphereFree => &["n", "a1", "a2"],
            ExampleId::CylinderRotations | ExampleId::CylinderTriple => &["n", "t", "a1", "a2"],
            ExampleId::CircleSphereSphere => &["n", "a", "b"],
            ExampleId::Hopf => &["t"],
            ExampleId::CylinderOrbit => &["n", "t"],
        }
    }

    /// Human-readable minimal orbit volumes `(A1, A2)`.
    pub fn orbit_volume_expressions(&self) -> (&'static str, &'static str) {
        match self {
            ExampleId::SphereFree | ExampleId::CylinderRotations | ExampleId::CylinderTriple => {
                ("a1", "a2")
            }
            ExampleId::CircleSphereSphere => ("2*pi^2", "8*pi^2*a*b^2"),
            ExampleId::Hopf | ExampleId::CylinderOrbit => ("2*pi", "2*pi*t"),
        }
    }

    /// Whether the weight is fixed to `f ≡ 1`.
    pub fn constant_weight(&self) -> bool {
        matches!(
            self,
            ExampleId::CylinderTriple | ExampleId::Hopf | ExampleId::CylinderOrbit
        )
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExampleId::ALL.iter().map(|id| id.as_str()).collect();
                Error::domain(format!("unknown example '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Model parameters of a worked configuration. Fields a configuration does
/// not read are carried along untouched.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub n: u32,
    /// Radius of the circle factor.
    pub t: f64,
    /// Radius of the circle factor in `S¹(a) × S²(b) × S^{n-3}`.
    pub a: f64,
    /// Radius of the 2-sphere factor in `S¹(a) × S²(b) × S^{n-3}`.
    pub b: f64,
    /// Cardinality of the smaller finite group.
    pub a1: f64,
    /// Cardinality of the larger finite group.
    pub a2: f64,
}

impl ExampleParams {
    pub fn defaults(id: ExampleId) -> Self {
        let base = ExampleParams {
            n: 5,
            t: 1.0,
            a: 10.0,
            b: 0.28,
            a1: 1.0,
            a2: 2.0,
        };
        match id {
            ExampleId::SphereFree => base,
            ExampleId::CylinderRotations => ExampleParams { t: 1.0, ..base },
            ExampleId::CircleSphereSphere => ExampleParams { n: 10, ..base },
            ExampleId::CylinderTriple => ExampleParams { t: 40.0, ..base },
            ExampleId::Hopf => ExampleParams { n: 4, t: 8.0, ..base },
            ExampleId::CylinderOrbit => ExampleParams { t: 5.0, ..base },
        }
    }
}

/// A manifold with the two group actions compared by the multiplicity results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleConfiguration {
    pub id: ExampleId,
    pub params: ExampleParams,
    pub manifold: ManifoldSpec,
    pub g1: GroupActionSpec,
    pub g2: GroupActionSpec,
}

fn integral_cardinalities(p: &ExampleParams) -> Result<()> {
    for (name, v) in [("a1", p.a1), ("a2", p.a2)] {
        if !(v >= 1.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX)) {
            return Err(Error::precondition(format!(
                "{name} is a group cardinality and must be a positive integer, got {v}"
            )));
        }
    }
    if p.a1 >= p.a2 {
        return Err(Error::precondition(format!(
            "orbit volumes must satisfy A1 < A2, got {} and {}",
            p.a1, p.a2
        )));
    }
    Ok(())
}

fn finite_action(name: &str, order: f64, scal: f64) -> GroupActionSpec {
    GroupActionSpec {
        name: name.to_string(),
        k: 0,
        orbit_volume: order,
        orbits_principal_constant_volume: true,
        hypothesis: OrbitHypothesis::FinitePrincipal,
        quotient_scal_lower: scal,
        vh_laplacian: VolumeLaplacian::Zero,
    }
}

/// `t` window in which the triple-solution configuration on `S¹(t) × S^{n-1}`
/// applies: `t` must exceed both returned values.
pub fn cylinder_triple_t_bounds(n: u32, a1: f64, a2: f64) -> Result<(f64, f64)> {
    let nf = f64::from(n);
    let wn = sphere_volume(n)?;
    let wn1 = sphere_volume(n - 1)?;
    let first = a2 * wn / (2.0 * PI * wn1) * (nf / (nf - 2.0)).powf(nf / 2.0);
    let e = 2.0 / nf;
    let second = (a2 * a2 * (2.0 * PI * wn1).powf(e)
        / ((a2.powf(e) - a1.powf(e)) * nf * (nf - 2.0) * wn.powf(e)))
    .powf(nf / (2.0 * (nf - 1.0)));
    Ok((first, second))
}

/// Upper end of the admissible `b²` window of the `S¹(a) × S²(b) × S^{n-3}`
/// configuration.
pub fn circle_sphere_sphere_b2_max(n: u32) -> f64 {
    let nf = f64::from(n);
    (nf - 5.0).powi(2) / ((nf - 7.0) * (3.0 * nf * nf - 26.0 * nf + 57.0))
}

/// Build a configuration, checking its standing parameter window.
pub fn example_configuration(id: ExampleId, p: &ExampleParams) -> Result<ExampleConfiguration> {
    build_configuration(id, p, true)
}

/// Build a configuration without checking the displayed parameter window
/// (`t` thresholds, the upper end of the `b²` window). Structural
/// requirements such as dimensions and `A1 < A2` are still enforced.
pub fn example_configuration_unchecked(
    id: ExampleId,
    p: &ExampleParams,
) -> Result<ExampleConfiguration> {
    build_configuration(id, p, false)
}

fn build_configuration(
    id: ExampleId,
    p: &ExampleParams,
    check_window: bool,
) -> Result<ExampleConfiguration> {
    let n = p.n;
    let nf = f64::from(n);
    let (manifold, g1, g2) = match id {
        ExampleId::SphereFree => {
            if n < 5 || n % 2 == 0 {
                return Err(Error::precondition(format!(
                    "sphere-free needs odd n >= 5, got {n}"
                )));
            }
            integral_cardinalities(p)?;
            let scal = oneill_scal_lower(n, 0, 1.0)?;
            (
                ManifoldSpec::sphere(n)?,
                finite_action("free group G1", p.a1, scal),
                finite_action("free group G2", p.a2, scal),
            )
        }
        ExampleId::CylinderRotations => {
            if n <= 4 {
                return Err(Error::precondition(format!(
                    "cylinder-rotations needs n > 4, got {n}"
                )));
            }
            let t_min = (nf * (nf - 4.0) / (4.0 * (nf - 2.0).powi(2))).sqrt();
            if check_window && !(p.t >= t_min) {
                return Err(Error::precondition(format!(
                    "cylinder-rotations needs t >= sqrt(n(n-4)/(4(n-2)^2)) = {t_min}, got t = {}",
                    p.t
                )));
            }
            integral_cardinalities(p)?;
            let scal = product_scal_lower(0.0, n - 1, 1)?;
            (
                ManifoldSpec::circle_times_sphere(p.t, n)?,
                finite_action("rotations R1 x Id", p.a1, scal),
                finite_action("rotations R2 x Id", p.a2, scal),
            )
        }
        ExampleId::CircleSphereSphere => {
            if n < 10 {
                return Err(Error::precondition(format!(
                    "circle-sphere-sphere needs n >= 10, got {n}"
                )));
            }
            positive("a", p.a)?;
            positive("b", p.b)?;
            let b2 = p.b * p.b;
            let lo = 1.0 / (4.0 * p.a);
            let hi = circle_sphere_sphere_b2_max(n);
            if !(lo < b2) || (check_window && !(b2 < hi)) {
                return Err(Error::precondition(format!(
                    "circle-sphere-sphere needs 1/(4a) < b^2 < (n-5)^2/((n-7)(3n^2-26n+57)), \
                     i.e. {lo} < {b2} < {hi}"
                )));
            }
            let manifold = ManifoldSpec::new(ManifoldModel::CircleSphereSphere {
                a: p.a,
                b: p.b,
                n,
            })?;
            let g1 = GroupActionSpec {
                name: "Id x O(n-6) x O(4)".into(),
                k: 3,
                orbit_volume: 2.0 * PI * PI,
                orbits_principal_constant_volume: false,
                hypothesis: OrbitHypothesis::H2,
                quotient_scal_lower: product_scal_lower(two_sphere_scal(p.b), n - 6, 4)?,
                vh_laplacian: VolumeLaplacian::NonNegative,
            };
            let g2 = GroupActionSpec {
                name: "O(2) x O(3) x Id".into(),
                k: 3,
                orbit_volume: 8.0 * PI * PI * p.a * b2,
                orbits_principal_constant_volume: true,
                hypothesis: OrbitHypothesis::H1,
                quotient_scal_lower: oneill_scal_lower(n - 3, 0, 1.0)?,
                vh_laplacian: VolumeLaplacian::Zero,
            };
            (manifold, g1, g2)
        }
        ExampleId::CylinderTriple => {
            if n < 3 {
                return Err(Error::precondition(format!("cylinder-triple needs n >= 3, got {n}")));
            }
            integral_cardinalities(p)?;
            let (t1, t2) = cylinder_triple_t_bounds(n, p.a1, p.a2)?;
            if check_window && !(p.t > t1.max(t2)) {
                return Err(Error::precondition(format!(
                    "cylinder-triple needs t > max({t1}, {t2}), got t = {}",
                    p.t
                )));
            }
            let scal = product_scal_lower(0.0, n - 1, 1)?;
            (
                ManifoldSpec::circle_times_sphere(p.t, n)?,
                finite_action("rotations R1 x Id", p.a1, scal),
                finite_action("rotations R2 x Id", p.a2, scal),
            )
        }
        ExampleId::Hopf => {
            if n != 4 {
                return Err(Error::precondition(format!("hopf is four-dimensional, got n = {n}")));
            }
            if check_window && !(p.t > 1.0) {
                return Err(Error::precondition(format!("hopf needs t > 1, got t = {}", p.t)));
            }
            let g1 = GroupActionSpec {
                name: "Id x Hopf circle".into(),
                k: 1,
                orbit_volume: 2.0 * PI,
                orbits_principal_constant_volume: true,
                hypothesis: OrbitHypothesis::H1,
                // Quotient S¹(t) × S²(1/2): the circle adds nothing.
                quotient_scal_lower: two_sphere_scal(0.5),
                vh_laplacian: VolumeLaplacian::Zero,
            };
            let g2 = GroupActionSpec {
                name: "O(2) x Id".into(),
                k: 1,
                orbit_volume: 2.0 * PI * p.t,
                orbits_principal_constant_volume: true,
                hypothesis: OrbitHypothesis::H1,
                quotient_scal_lower: oneill_scal_lower(3, 0, 1.0)?,
                vh_laplacian: VolumeLaplacian::Zero,
            };
            (ManifoldSpec::circle_times_sphere(p.t, 4)?, g1, g2)
        }
        ExampleId::CylinderOrbit => {
            if n < 4 {
                return Err(Error::precondition(format!("cylinder-orbit needs n >= 4, got {n}")));
            }
            let t_min = ((nf - 1.0) / (nf - 3.0)).powf((nf - 1.0) / 2.0);
            if check_window && !(p.t > t_min) {
                return Err(Error::precondition(format!(
                    "cylinder-orbit needs t > ((n-1)/(n-3))^((n-1)/2) = {t_min}, got t = {}",
                    p.t
                )));
            }
            let g1 = GroupActionSpec {
                name: "Id x O(n-2) x O(2)".into(),
                k: 1,
                orbit_volume: 2.0 * PI,
                orbits_principal_constant_volume: false,
                hypothesis: OrbitHypothesis::H2,
                quotient_scal_lower: product_scal_lower(0.0, n - 2, 2)?,
                vh_laplacian: VolumeLaplacian::NonNegative,
            };
            let g2 = GroupActionSpec {
                name: "O(2) x Id".into(),
                k: 1,
                orbit_volume: 2.0 * PI * p.t,
                orbits_principal_constant_volume: true,
                hypothesis: OrbitHypothesis::H1,
                quotient_scal_lower: oneill_scal_lower(n - 1, 0, 1.0)?,
                vh_laplacian: VolumeLaplacian::Zero,
            };
            (ManifoldSpec::circle_times_sphere(p.t, n)?, g1, g2)
        }
    };
    g1.validate(n)?;
    g2.validate(n)?;
    Ok(ExampleConfiguration {
        id,
        params: *p,
        manifold,
        g1,
        g2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oneill_examples() {
        assert_eq!(oneill_scal_lower(3, 1, 1.0).unwrap(), 2.0);
        assert!(oneill_scal_lower(3, 1, 1.0).unwrap() <= two_sphere_scal(0.5));
        assert_eq!(oneill_scal_lower(7, 0, 2.0).unwrap(), 2.0 * 42.0);
        assert_eq!(oneill_scal_lower(4, 1, 0.0).unwrap(), 0.0);
        assert!(oneill_scal_lower(3, 3, 1.0).is_err());
    }

    #[test]
    fn product_examples() {
        let b = 0.3_f64;
        let n = 12;
        let got = product_scal_lower(2.0 / (b * b), n - 6, 4).unwrap();
        assert!((got - (2.0 / (b * b) + 6.0 * 5.0)).abs() < 1e-12);
        assert_eq!(product_scal_lower(0.0, 5 - 2, 2).unwrap(), 6.0);
        assert_eq!(product_scal_lower(0.0, 1, 1).unwrap(), 0.0);
        assert!(product_scal_lower(0.0, 1, 2).is_err());
    }

    #[test]
    fn example_ids_round_trip_through_strings() {
        for id in ExampleId::ALL {
            assert_eq!(id.as_str().parse::<ExampleId>().unwrap(), id);
        }
        assert!("nope".parse::<ExampleId>().is_err());
    }

    #[test]
    fn hopf_orbit_volumes() {
        let p = ExampleParams { t: 2.0, ..ExampleParams::defaults(ExampleId::Hopf) };
        let c = example_configuration(ExampleId::Hopf, &p).unwrap();
        assert_eq!(c.g2.k, 1);
        assert_eq!(c.g2.orbit_volume, 4.0 * PI);
        assert_eq!(c.g1.orbit_volume, 2.0 * PI);
        assert!(example_configuration(ExampleId::Hopf, &ExampleParams { t: 1.0, ..p }).is_err());
    }

    #[test]
    fn defaults_are_admissible() {
        for id in ExampleId::ALL {
            example_configuration(id, &ExampleParams::defaults(id)).unwrap();
        }
    }
}
