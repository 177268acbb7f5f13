//! Universal constants (unit-sphere volumes, sharp Sobolev constants), the
//! interval type used to carry inexactly known best constants, and the
//! dimension bookkeeping shared by every equation instance.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Riemannian volume `ω_N` of the unit `N`-sphere.
///
/// Evaluated through the two-step recursion `ω_N = 2π ω_{N-2} / (N-1)`
/// seeded with `ω_0 = 2` and `ω_1 = 2π`, which is the gamma-function closed
/// form `2 π^{(N+1)/2} / Γ((N+1)/2)` unrolled over half-integers.
pub fn sphere_volume(dim: u32) -> Result<f64> {
    if dim == 0 {
        return Err(Error::domain("sphere dimension must be at least 1"));
    }
    let mut even = 2.0;
    let mut odd = 2.0 * PI;
    for d in 2..=dim {
        let next = 2.0 * PI / f64::from(d - 1);
        if d % 2 == 0 {
            even *= next;
        } else {
            odd *= next;
        }
    }
    Ok(if dim % 2 == 0 { even } else { odd })
}

/// Sharp Sobolev constant `K_N = 4 / (N (N-2) ω_N^{2/N})`.
pub fn sobolev_constant(dim: u32) -> Result<f64> {
    if dim < 3 {
        return Err(Error::domain(format!(
            "sharp Sobolev constant needs dimension >= 3, got {dim}"
        )));
    }
    let n = f64::from(dim);
    let omega = sphere_volume(dim)?;
    Ok(4.0 / (n * (n - 2.0) * omega.powf(2.0 / n)))
}

/// Closed real interval `[lo, hi]` known to contain a constant.
///
/// `hi` may be `+∞` when no upper estimate is available; `lo` is always
/// finite. Arithmetic on bounds rounds outward whenever the floating-point
/// result is inexact, so the containment property survives rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBound {
    lo: f64,
    #[serde(with = "unbounded_as_null")]
    hi: f64,
}

impl ConstantBound {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::domain("bound endpoints must not be NaN"));
        }
        if !lo.is_finite() {
            return Err(Error::domain("lower endpoint must be finite"));
        }
        if hi == f64::NEG_INFINITY || lo > hi {
            return Err(Error::domain(format!("empty bound [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn exact(value: f64) -> Self {
        assert!(value.is_finite(), "exact bound must be finite");
        Self { lo: value, hi: value }
    }

    /// `[lo, +∞)`: only a lower estimate is known.
    pub fn at_least(lo: f64) -> Self {
        assert!(lo.is_finite(), "lower endpoint must be finite");
        Self { lo, hi: f64::INFINITY }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn has_upper(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Does `self` contain every point of `other`?
    pub fn encloses(&self, other: &ConstantBound) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn max(&self, other: &ConstantBound) -> ConstantBound {
        ConstantBound {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(&self, other: &ConstantBound) -> ConstantBound {
        ConstantBound {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// `c · [lo, hi]`.
    ///
    /// # Panics
    /// If `c` is not finite, or if `c < 0` and the bound is unbounded above
    /// (the result would have no finite lower endpoint).
    pub fn scale(&self, c: f64) -> ConstantBound {
        assert!(c.is_finite(), "scale factor must be finite");
        if c == 0.0 {
            return ConstantBound::exact(0.0);
        }
        if c > 0.0 {
            let hi = if self.hi.is_finite() {
                mul_up(self.hi, c)
            } else {
                f64::INFINITY
            };
            ConstantBound {
                lo: mul_down(self.lo, c),
                hi,
            }
        } else {
            assert!(
                self.hi.is_finite(),
                "cannot scale an unbounded bound by a negative factor"
            );
            ConstantBound {
                lo: mul_down(self.hi, c),
                hi: mul_up(self.lo, c),
            }
        }
    }

    /// `[lo + c, hi + c]`.
    pub fn shift(&self, c: f64) -> ConstantBound {
        assert!(c.is_finite(), "shift must be finite");
        let hi = if self.hi.is_finite() {
            add_up(self.hi, c)
        } else {
            f64::INFINITY
        };
        ConstantBound {
            lo: add_down(self.lo, c),
            hi,
        }
    }

    /// Minkowski sum `[a.lo + b.lo, a.hi + b.hi]`.
    pub fn add(&self, other: &ConstantBound) -> ConstantBound {
        let hi = if self.hi.is_finite() && other.hi.is_finite() {
            add_up(self.hi, other.hi)
        } else {
            f64::INFINITY
        };
        ConstantBound {
            lo: add_down(self.lo, other.lo),
            hi,
        }
    }
}

impl fmt::Display for ConstantBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_finite() {
            write!(f, "[{}, {}]", self.lo, self.hi)
        } else {
            write!(f, "[{}, +inf)", self.lo)
        }
    }
}

impl From<f64> for ConstantBound {
    fn from(value: f64) -> Self {
        ConstantBound::exact(value)
    }
}

// Error-free transforms decide whether a rounded result needs widening.

fn add_err(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn add_down(a: f64, b: f64) -> f64 {
    let (s, err) = add_err(a, b);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let (s, err) = add_err(a, b);
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Serialize `+∞` as JSON `null`.
pub(crate) mod unbounded_as_null {
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

/// Manifold dimension `n` and minimal orbit dimension `k` of an equation
/// `Δu + αu = f u^p` with `p = 2♯ - 1`, `2♯ = 2(n-k)/(n-2-k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    n: u32,
    k: u32,
}

impl Dimensions {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("manifold dimension must be >= 3, got {n}")));
        }
        if k + 2 >= n {
            return Err(Error::hypothesis(format!(
                "need n - k > 2 (n = {n}, k = {k})"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Dimension `n - k` of the quotient near a minimal orbit.
    pub fn reduced(&self) -> u32 {
        self.n - self.k
    }

    pub fn two_sharp(&self) -> f64 {
        let m = f64::from(self.reduced());
        2.0 * m / (m - 2.0)
    }

    pub fn power(&self) -> f64 {
        let m = f64::from(self.reduced());
        (m + 2.0) / (m - 2.0)
    }

    pub fn is_critical(&self) -> bool {
        self.k == 0
    }

    /// `K_{n-k}`.
    pub fn sobolev(&self) -> f64 {
        sobolev_constant(self.reduced()).expect("n - k > 2 checked at construction")
    }
}

/// One instance of the equation: dimensions plus the linear coefficient `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationParams {
    pub dims: Dimensions,
    pub alpha: f64,
}

impl EquationParams {
    pub fn new(n: u32, k: u32, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            dims: Dimensions::new(n, k)?,
            alpha,
        })
    }

    pub fn two_sharp(&self) -> f64 {
        self.dims.two_sharp()
    }

    pub fn power(&self) -> f64 {
        self.dims.power()
    }
}
