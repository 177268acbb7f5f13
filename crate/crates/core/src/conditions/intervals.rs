//! Multiplicity conditions and the α-intervals on which they hold.
//!
//! Every evaluator follows the same propagation rule: an upper bound on α
//! built from a best constant uses the constant's lower estimate, a lower
//! bound on α uses its upper estimate. An unavailable upper estimate makes
//! the dependent condition unverifiable rather than guessed.

use serde::{Deserialize, Serialize};

use crate::constants::{sobolev_constant, ConstantBound, Dimensions};
use crate::error::{Error, Result};

use super::profile::FProfile;

/// Slack used when a strict inequality between computed transcendental
/// quantities must be certain rather than merely observed.
const SLACK: f64 = 16.0 * f64::EPSILON;

/// `a < b` with a margin of a few ulps.
pub fn certainly_less(a: f64, b: f64) -> bool {
    a + SLACK * a.abs().max(b.abs()) < b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Satisfied,
    Unsatisfiable,
    NeedsUnknownConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub label: String,
    pub status: ConditionStatus,
    /// Threshold the condition imposes on α (or the quantity it tests).
    pub value: Option<f64>,
}

impl ConditionVerdict {
    pub fn new(label: impl Into<String>, status: ConditionStatus, value: Option<f64>) -> Self {
        Self {
            label: label.into(),
            status,
            value: value.filter(|v| v.is_finite()),
        }
    }
}

/// Whether the orbit-volume condition is strict. It may be relaxed when one
/// of the two solutions is known to sit strictly below the existence
/// threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapStrictness {
    Strict,
    Relaxed,
}

impl GapStrictness {
    fn is_strict(self) -> bool {
        self == GapStrictness::Strict
    }
}

/// An α-interval with open/closed ends and the per-condition verdicts that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteedInterval {
    #[serde(with = "lower_endpoint")]
    pub lo: f64,
    #[serde(with = "crate::constants::unbounded_as_null")]
    pub hi: f64,
    pub lo_strict: bool,
    pub hi_strict: bool,
    pub empty: bool,
    pub diagnostics: Vec<ConditionVerdict>,
}

impl GuaranteedInterval {
    pub fn new(lo: f64, hi: f64, lo_strict: bool, hi_strict: bool) -> Self {
        let mut out = Self {
            lo,
            hi,
            lo_strict,
            hi_strict,
            empty: false,
            diagnostics: Vec::new(),
        };
        out.refresh();
        out
    }

    /// Interval whose extent depends on a constant nobody has bounded.
    pub fn unknown(diagnostics: Vec<ConditionVerdict>) -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            lo_strict: true,
            hi_strict: true,
            empty: true,
            diagnostics,
        }
    }

    /// `(0, ∞)`: the admissible range of α before any condition.
    pub fn positive_half_line() -> Self {
        Self::new(0.0, f64::INFINITY, true, true)
    }

    pub fn is_unknown(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.status == ConditionStatus::NeedsUnknownConstant)
    }

    fn refresh(&mut self) {
        self.empty = self.lo.is_nan()
            || self.hi.is_nan()
            || self.lo > self.hi
            || (self.lo == self.hi && (self.lo_strict || self.hi_strict));
    }

    pub fn contains(&self, alpha: f64) -> bool {
        if self.empty {
            return false;
        }
        let above = if self.lo_strict { alpha > self.lo } else { alpha >= self.lo };
        let below = if self.hi_strict { alpha < self.hi } else { alpha <= self.hi };
        above && below
    }

    /// Impose `α > x` (strict) or `α ≥ x`.
    pub fn raise_lower(&mut self, x: f64, strict: bool) {
        if x > self.lo {
            self.lo = x;
            self.lo_strict = strict;
        } else if x == self.lo {
            self.lo_strict |= strict;
        }
        self.refresh();
    }

    /// Impose `α < x` (strict) or `α ≤ x`.
    pub fn lower_upper(&mut self, x: f64, strict: bool) {
        if x < self.hi {
            self.hi = x;
            self.hi_strict = strict;
        } else if x == self.hi {
            self.hi_strict |= strict;
        }
        self.refresh();
    }

    pub fn intersect(&self, other: &GuaranteedInterval) -> GuaranteedInterval {
        if self.is_unknown() || other.is_unknown() {
            let mut d = self.diagnostics.clone();
            d.extend(other.diagnostics.iter().cloned());
            return GuaranteedInterval::unknown(d);
        }
        let forced = self.empty || other.empty;
        let mut out = self.clone();
        out.raise_lower(other.lo, other.lo_strict);
        out.lower_upper(other.hi, other.hi_strict);
        out.empty |= forced;
        out.diagnostics.extend(other.diagnostics.iter().cloned());
        out
    }

    pub fn midpoint(&self) -> Option<f64> {
        (!self.empty && self.hi.is_finite()).then_some(0.5 * (self.lo + self.hi))
    }

    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn diagnostic(&self, label: &str) -> Option<&ConditionVerdict> {
        self.diagnostics.iter().find(|d| d.label == label)
    }

    pub fn push(&mut self, verdict: ConditionVerdict) {
        self.diagnostics.push(verdict);
    }
}

mod lower_endpoint {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            s.serialize_f64(*value)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// The inequality `‖u‖²_crit ≤ P ‖∇u‖²₂ + P·D ‖u‖²₂` that drives the
/// separation argument, with `2 < crit < 4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericIneqParams {
    pub crit: f64,
    pub p_const: f64,
    /// May be `+∞` when no upper estimate of the zero-order constant exists.
    #[serde(with = "crate::constants::unbounded_as_null")]
    pub d_const: f64,
}

impl GenericIneqParams {
    pub fn new(crit: f64, p_const: f64, d_const: f64) -> Result<Self> {
        if !(crit > 2.0 && crit < 4.0) {
            return Err(Error::hypothesis(format!(
                "the generic inequality needs 2 < crit < 4, got {crit}"
            )));
        }
        if !(p_const > 0.0 && p_const.is_finite()) {
            return Err(Error::domain(format!("P must be positive, got {p_const}")));
        }
        if !(d_const >= 0.0) {
            return Err(Error::domain(format!("D must be nonnegative, got {d_const}")));
        }
        Ok(Self {
            crit,
            p_const,
            d_const,
        })
    }

    /// Plain Sobolev inequality on M: `crit = 2n/(n-2)`, `P = K_n`, `D = B₀(M)`.
    pub fn sobolev(n: u32, b0_manifold: &ConstantBound) -> Result<Self> {
        let nf = f64::from(n);
        Self::new(2.0 * nf / (nf - 2.0), sobolev_constant(n)?, b0_manifold.hi())
    }

    /// Invariant inequality for the larger group: `crit = 2♯`,
    /// `P = K_{n-k} A₂^{-2/(n-k)}`, `D = B₀,G₂`.
    pub fn invariant(dims: &Dimensions, a2: f64, b0g2: &ConstantBound) -> Result<Self> {
        let m = f64::from(dims.reduced());
        Self::new(
            dims.two_sharp(),
            dims.sobolev() * a2.powf(-2.0 / m),
            b0g2.hi(),
        )
    }

    /// `(4 - crit) crit / 4`.
    pub fn multiplier(&self) -> f64 {
        (4.0 - self.crit) * self.crit / 4.0
    }
}

/// Orbit volumes of the two groups, the manifold volume and the second best
/// constant of the larger group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationData {
    pub a1: f64,
    pub a2: f64,
    pub volume: f64,
    pub b0g2: ConstantBound,
}

impl SeparationData {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("A1", self.a1), ("A2", self.a2), ("volume", self.volume)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.a1 < self.a2) {
            return Err(Error::precondition(format!(
                "orbit volumes must satisfy A1 < A2, got {} and {}",
                self.a1, self.a2
            )));
        }
        Ok(())
    }

    /// `(A2/A1)^{2/(n-k)} - 1`, accurate for nearly equal volumes.
    fn volume_ratio_excess(&self, dims: &Dimensions) -> f64 {
        let m = f64::from(dims.reduced());
        (2.0 / m * (self.a2 / self.a1).ln()).exp_m1()
    }
}

pub const LABEL_UPPER: &str = "alpha <= B0,G2";
pub const LABEL_MULTIPLIER: &str = "alpha >= (4-crit)crit/4 * D";
pub const LABEL_GAP: &str = "alpha > B0,G2 - orbit gap";

/// `B₀,G₂.hi - gap`, rounded up; `None` when the upper estimate is missing.
fn gap_threshold(b0g2: &ConstantBound, gap: f64) -> Option<f64> {
    b0g2.has_upper().then(|| b0g2.shift(-gap).hi())
}

/// Assemble `(0,∞) ∩ {α ≤ upper} ∩ {α ≥ lower_closed} ∩ {α > gap_lower}`.
fn assemble(
    upper: f64,
    lower_closed: Option<f64>,
    gap_lower: Option<f64>,
    strictness: GapStrictness,
    labels: [&str; 3],
) -> GuaranteedInterval {
    let mut unknown = false;
    let mut out = GuaranteedInterval::positive_half_line();
    out.lower_upper(upper, false);
    match lower_closed {
        Some(x) => out.raise_lower(x, false),
        None => unknown = true,
    }
    match gap_lower {
        Some(x) => out.raise_lower(x, strictness.is_strict()),
        None => unknown = true,
    }
    let known = if out.empty {
        ConditionStatus::Unsatisfiable
    } else {
        ConditionStatus::Satisfied
    };
    let verdict = |label: &str, v: Option<f64>| {
        ConditionVerdict::new(
            label,
            if v.is_some() { known } else { ConditionStatus::NeedsUnknownConstant },
            v,
        )
    };
    let diagnostics = vec![
        verdict(labels[0], Some(upper)),
        verdict(labels[1], lower_closed),
        verdict(labels[2], gap_lower),
    ];
    if unknown {
        let diagnostics = diagnostics
            .into_iter()
            .map(|mut d| {
                if d.status != ConditionStatus::NeedsUnknownConstant {
                    d.status = ConditionStatus::Satisfied;
                }
                d
            })
            .collect();
        return GuaranteedInterval::unknown(diagnostics);
    }
    out.diagnostics = diagnostics;
    out
}

/// Separation interval for the generic inequality: α with
/// `α ≤ B₀,G₂`, `α ≥ (4-crit)crit/4 · D` and `α > B₀,G₂ - gap`.
pub fn separation_interval_generic(
    dims: &Dimensions,
    gen: &GenericIneqParams,
    data: &SeparationData,
    f: &FProfile,
    strictness: GapStrictness,
) -> Result<GuaranteedInterval> {
    data.validate()?;
    f.validate()?;
    // Re-check: the struct fields are public.
    let gen = GenericIneqParams::new(gen.crit, gen.p_const, gen.d_const)?;
    let m = f64::from(dims.reduced());
    let c = gen.crit;
    let mult = gen.multiplier();
    let shape = (c - 2.0) * (m - 2.0) / (2.0 * m);
    let gap = data.volume_ratio_excess(dims)
        * data.a2.powf((2.0 - c) / m)
        * dims.sobolev().powf((c - 2.0) / 2.0)
        / (data.volume.powf(shape) * gen.p_const.powf(c / 2.0))
        * mult.powf(c / 2.0)
        * f.peak_ratio().powf(shape);
    let lower = gen.d_const.is_finite().then_some(mult * gen.d_const);
    Ok(assemble(
        data.b0g2.lo(),
        lower,
        gap_threshold(&data.b0g2, gap),
        strictness,
        [LABEL_UPPER, LABEL_MULTIPLIER, LABEL_GAP],
    ))
}

/// Separation interval from the plain Sobolev inequality on M (n > 4),
/// evaluated from its own closed form.
pub fn separation_interval_sobolev(
    dims: &Dimensions,
    data: &SeparationData,
    b0_manifold: &ConstantBound,
    f: &FProfile,
    strictness: GapStrictness,
) -> Result<GuaranteedInterval> {
    if dims.n() <= 4 {
        return Err(Error::hypothesis(format!(
            "the Sobolev-form separation needs n > 4, got n = {}",
            dims.n()
        )));
    }
    data.validate()?;
    f.validate()?;
    let n = f64::from(dims.n());
    let m = f64::from(dims.reduced());
    let k_n = sobolev_constant(dims.n())?;
    let k_m = dims.sobolev();
    let factor = n * (n - 4.0) / ((n - 2.0) * (n - 2.0));
    let gap = data.volume_ratio_excess(dims)
        * data.a2.powf(-4.0 / (m * (n - 2.0)))
        * k_m.powf(2.0 / (n - 2.0))
        / (data.volume.powf(2.0 * (m - 2.0) / (m * (n - 2.0))) * k_n.powf(n / (n - 2.0)))
        * factor.powf(n / (n - 2.0))
        * f.peak_ratio().powf(2.0 * (m - 2.0) / (m * (n - 2.0)));
    let lower = b0_manifold.has_upper().then(|| factor * b0_manifold.hi());
    Ok(assemble(
        data.b0g2.lo(),
        lower,
        gap_threshold(&data.b0g2, gap),
        strictness,
        [LABEL_UPPER, LABEL_MULTIPLIER, LABEL_GAP],
    ))
}

/// Separation interval from the invariant inequality of the larger group
/// (n - k > 4), evaluated from its own closed form.
pub fn separation_interval_invariant(
    dims: &Dimensions,
    data: &SeparationData,
    f: &FProfile,
    strictness: GapStrictness,
) -> Result<GuaranteedInterval> {
    if dims.reduced() <= 4 {
        return Err(Error::hypothesis(format!(
            "the invariant-form separation needs n - k > 4, got n - k = {}",
            dims.reduced()
        )));
    }
    data.validate()?;
    f.validate()?;
    let m = f64::from(dims.reduced());
    let factor = m * (m - 4.0) / ((m - 2.0) * (m - 2.0));
    let gap = data.volume_ratio_excess(dims) * data.a2.powf(2.0 / m)
        / (data.volume.powf(2.0 / m) * dims.sobolev())
        * factor.powf(m / (m - 2.0))
        * f.peak_ratio().powf(2.0 / m);
    let lower = data.b0g2.has_upper().then(|| factor * data.b0g2.hi());
    Ok(assemble(
        data.b0g2.lo(),
        lower,
        gap_threshold(&data.b0g2, gap),
        strictness,
        [LABEL_UPPER, LABEL_MULTIPLIER, LABEL_GAP],
    ))
}

/// `(A₂^{2/(n-k)} - A₁^{2/(n-k)}) / (K_{n-k} V^{2/(n-k)}) · weight`.
fn holder_gap(dims: &Dimensions, a1: f64, a2: f64, volume: f64, weight: f64) -> f64 {
    let m = f64::from(dims.reduced());
    let e = 2.0 / m;
    (a2.powf(e) - a1.powf(e)) / (dims.sobolev() * volume.powf(e)) * weight
}

/// `A^{2/(n-k)} / (K_{n-k} V^{2/(n-k)})`: the α at which the constant
/// solution's energy equals the existence threshold energy for orbit volume A.
pub fn constant_solution_crossover(dims: &Dimensions, a: f64, volume: f64) -> f64 {
    let e = 2.0 / f64::from(dims.reduced());
    a.powf(e) / (dims.sobolev() * volume.powf(e))
}

pub const LABEL_HOLDER_GAP: &str = "alpha > B0,G2 - weighted orbit gap";

/// Separation interval obtained by Hölder's inequality, valid for every
/// `n - k > 2`: `α ≤ B₀,G₂` and
/// `α > B₀,G₂ - (A₂^{2/(n-k)} - A₁^{2/(n-k)})/(K V^{2/(n-k)}) · min f / ((max f)^{2/2♯} <f>^{2/(n-k)})`.
pub fn separation_interval_holder(
    dims: &Dimensions,
    data: &SeparationData,
    f: &FProfile,
    strictness: GapStrictness,
) -> Result<GuaranteedInterval> {
    data.validate()?;
    f.validate()?;
    let m = f64::from(dims.reduced());
    let weight = f.f_min / (f.f_max.powf(2.0 / dims.two_sharp()) * f.f_avg.powf(2.0 / m));
    let gap = holder_gap(dims, data.a1, data.a2, data.volume, weight);
    let threshold = gap_threshold(&data.b0g2, gap);
    let mut out = GuaranteedInterval::positive_half_line();
    out.lower_upper(data.b0g2.lo(), false);
    match threshold {
        Some(x) => out.raise_lower(x, strictness.is_strict()),
        None => {
            return Ok(GuaranteedInterval::unknown(vec![
                ConditionVerdict::new(LABEL_UPPER, ConditionStatus::Satisfied, Some(data.b0g2.lo())),
                ConditionVerdict::new(LABEL_HOLDER_GAP, ConditionStatus::NeedsUnknownConstant, None),
            ]))
        }
    }
    let status = if out.empty {
        ConditionStatus::Unsatisfiable
    } else {
        ConditionStatus::Satisfied
    };
    out.diagnostics = vec![
        ConditionVerdict::new(LABEL_UPPER, status, Some(data.b0g2.lo())),
        ConditionVerdict::new(LABEL_HOLDER_GAP, status, threshold),
    ];
    Ok(out)
}

pub const LABEL_DOUBLE_PRECONDITION: &str = "B0,G2 - T2 < B0,G1 - T1";
pub const LABEL_TRIPLE_PRECONDITION: &str = "T2 < min B0,Gi";

/// Intervals for `f ≡ 1`: two solutions of different energy, and three
/// when the constant solution is also separated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantWeightIntervals {
    pub double: GuaranteedInterval,
    pub triple: GuaranteedInterval,
}

pub fn constant_weight_intervals(
    dims: &Dimensions,
    a1: f64,
    a2: f64,
    volume: f64,
    b0g1: &ConstantBound,
    b0g2: &ConstantBound,
) -> Result<ConstantWeightIntervals> {
    let data = SeparationData {
        a1,
        a2,
        volume,
        b0g2: *b0g2,
    };
    data.validate()?;
    let t1 = constant_solution_crossover(dims, a1, volume);
    let t2 = constant_solution_crossover(dims, a2, volume);
    let gap = holder_gap(dims, a1, a2, volume, 1.0);
    let upper = b0g1.lo().min(b0g2.lo());

    let Some(lower) = gap_threshold(b0g2, gap) else {
        let d = vec![
            ConditionVerdict::new(LABEL_DOUBLE_PRECONDITION, ConditionStatus::NeedsUnknownConstant, None),
            ConditionVerdict::new(LABEL_HOLDER_GAP, ConditionStatus::NeedsUnknownConstant, None),
        ];
        return Ok(ConstantWeightIntervals {
            double: GuaranteedInterval::unknown(d.clone()),
            triple: GuaranteedInterval::unknown(d),
        });
    };

    // Compared as sums: each difference can cancel to a few ulps.
    let pre_holds = certainly_less(b0g2.hi() + t1, b0g1.lo() + t2);
    let mut double = GuaranteedInterval::positive_half_line();
    double.lower_upper(upper, true);
    double.raise_lower(lower, false);
    if !pre_holds {
        double.empty = true;
    }
    let status = |ok: bool| {
        if ok {
            ConditionStatus::Satisfied
        } else {
            ConditionStatus::Unsatisfiable
        }
    };
    double.diagnostics = vec![
        ConditionVerdict::new(
            LABEL_DOUBLE_PRECONDITION,
            status(pre_holds),
            Some((b0g1.lo() - t1) - (b0g2.hi() - t2)),
        ),
        ConditionVerdict::new(LABEL_HOLDER_GAP, status(!double.empty), Some(lower)),
        ConditionVerdict::new("alpha < min B0,Gi", status(!double.empty), Some(upper)),
    ];

    let triple_holds = certainly_less(t2, upper);
    let mut triple = double.clone();
    triple.raise_lower(t2, false);
    if !(triple_holds && pre_holds) {
        triple.empty = true;
    }
    triple.push(ConditionVerdict::new(
        LABEL_TRIPLE_PRECONDITION,
        status(triple_holds),
        Some(t2),
    ));
    Ok(ConstantWeightIntervals { double, triple })
}

/// One group in a family compared pairwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitGroup {
    pub k: u32,
    pub orbit_volume: f64,
    pub b0g: ConstantBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    /// Index of the group with the larger orbit volume.
    pub larger: usize,
    /// Index of the group with the smaller orbit volume.
    pub smaller: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `E(u_smaller) < E(u_larger)` is guaranteed.
    pub separated: bool,
}

/// Pairwise energy separation in a family of groups with common minimal
/// orbit dimension, via the Sobolev form (n > 4).
pub fn pairwise_separation(
    n: u32,
    volume: f64,
    b0_manifold: &ConstantBound,
    groups: &[OrbitGroup],
    alpha: f64,
    f: &FProfile,
) -> Result<Vec<PairVerdict>> {
    let Some(first) = groups.first() else {
        return Ok(Vec::new());
    };
    if groups.iter().any(|g| g.k != first.k) {
        return Err(Error::hypothesis("all groups must share the minimal orbit dimension"));
    }
    let dims = Dimensions::new(n, first.k)?;
    if n <= 4 {
        return Err(Error::hypothesis(format!("pairwise separation needs n > 4, got {n}")));
    }
    f.validate()?;
    let nf = f64::from(n);
    let m = f64::from(dims.reduced());
    let factor = nf * (nf - 4.0) / ((nf - 2.0) * (nf - 2.0));
    let lo = factor * b0_manifold.hi();
    let hi = groups.iter().map(|g| g.b0g.lo()).fold(f64::INFINITY, f64::min);
    if !(lo <= alpha && alpha <= hi) {
        return Err(Error::precondition(format!(
            "alpha = {alpha} must lie in [n(n-4)/(n-2)^2 B0, min B0,Gi] = [{lo}, {hi}]"
        )));
    }
    let k_n = sobolev_constant(n)?;
    let k_m = dims.sobolev();
    let integral_f = f.f_avg * volume;
    let common = k_n.powf(nf / (nf - 2.0)) * k_m.powf(-2.0 / (nf - 2.0))
        * factor.recip().powf(nf / (nf - 2.0))
        * (integral_f / f.f_max).powf(2.0 * (m - 2.0) / (m * (nf - 2.0)));
    let mut out = Vec::new();
    for (i, gi) in groups.iter().enumerate() {
        for (j, gj) in groups.iter().enumerate() {
            if !(gj.orbit_volume < gi.orbit_volume) {
                continue;
            }
            let lhs = (gi.orbit_volume / gj.orbit_volume).powf(2.0 / m);
            let rhs = 1.0
                + (gi.b0g.hi() - alpha)
                    * common
                    * gi.orbit_volume.powf(4.0 / (m * (nf - 2.0)));
            out.push(PairVerdict {
                larger: i,
                smaller: j,
                lhs,
                rhs,
                separated: lhs > rhs,
            });
        }
    }
    Ok(out)
}
