//! The symmetry-reduced problem: functions of one periodic coordinate `s`
//! on a circle of length `ℓ`, with every integral carrying a constant
//! transverse weight `w` (the measure of the fibre over each point).

use serde::{Deserialize, Serialize};

use crate::constants::sphere_volume;
use crate::error::{Error, Result};

/// Discretized reduced problem `-u'' + αu = f u^p` on a periodic grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedProblem {
    pub length: f64,
    pub weight: f64,
    pub alpha: f64,
    pub p: f64,
    pub f: Vec<f64>,
    /// Minimal orbit volume of the symmetry group, when known. Enables the
    /// existence threshold in reports.
    pub orbit_volume: Option<f64>,
}

impl ReducedProblem {
    pub fn new(length: f64, weight: f64, alpha: f64, p: f64, f: Vec<f64>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain(format!("length must be positive, got {length}")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::domain(format!("weight must be positive, got {weight}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::domain(format!("power must exceed 1, got {p}")));
        }
        if f.len() < 8 {
            return Err(Error::domain(format!("grid needs at least 8 points, got {}", f.len())));
        }
        if f.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::domain("weight function f must be positive and finite"));
        }
        Ok(ReducedProblem { length, weight, alpha, p, f, orbit_volume: None })
    }

    pub fn constant_f(length: f64, weight: f64, alpha: f64, p: f64, grid: usize) -> Result<Self> {
        Self::new(length, weight, alpha, p, vec![1.0; grid])
    }

    /// Samples `f` at the grid points `s_i = i ℓ / m`.
    pub fn with_f_fn(
        length: f64,
        weight: f64,
        alpha: f64,
        p: f64,
        grid: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let h = length / grid as f64;
        Self::new(length, weight, alpha, p, (0..grid).map(|i| f(i as f64 * h)).collect())
    }

    pub fn with_orbit_volume(mut self, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!("orbit volume must be positive, got {a}")));
        }
        self.orbit_volume = Some(a);
        Ok(self)
    }

    /// `S¹(t) × S^{n-1}` reduced along the sphere factor, restricted to
    /// functions invariant under rotation of the circle by `2π/order`.
    /// The orbit volume is `order`.
    pub fn circle_times_sphere(
        t: f64,
        n: u32,
        order: u32,
        alpha: f64,
        p: f64,
        grid: usize,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("rotation order must be at least 1"));
        }
        let fibre = sphere_volume(n - 1)?;
        let a = f64::from(order);
        Self::constant_f(2.0 * std::f64::consts::PI * t / a, a * fibre, alpha, p, grid)?
            .with_orbit_volume(a)
    }

    pub fn grid(&self) -> usize {
        self.f.len()
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.f.len() as f64
    }

    /// `2♯ = p + 1`.
    pub fn two_sharp(&self) -> f64 {
        self.p + 1.0
    }

    /// Effective dimension `n - k = 2·2♯/(2♯ - 2)`.
    pub fn reduced_dim(&self) -> f64 {
        2.0 * (self.p + 1.0) / (self.p - 1.0)
    }

    /// `w ℓ`, the volume of the underlying manifold.
    pub fn volume(&self) -> f64 {
        self.weight * self.length
    }

    pub fn f_max(&self) -> f64 {
        self.f.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn f_min(&self) -> f64 {
        self.f.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// `∫ f`.
    pub fn f_integral(&self) -> f64 {
        self.weight * self.spacing() * self.f.iter().sum::<f64>()
    }

    /// Mean of f over the grid.
    pub fn f_mean(&self) -> f64 {
        self.f.iter().sum::<f64>() / self.f.len() as f64
    }

    pub fn is_constant_f(&self) -> bool {
        self.f_max() == self.f_min()
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let mut q = Self::new(self.length, self.weight, alpha, self.p, self.f.clone())?;
        q.orbit_volume = self.orbit_volume;
        Ok(q)
    }

    /// Same problem on a different grid (f resampled by periodic linear
    /// interpolation).
    pub fn regrid(&self, grid: usize) -> Result<Self> {
        let old = self.f.len();
        let f = (0..grid)
            .map(|i| {
                let x = i as f64 * old as f64 / grid as f64;
                let j = x.floor() as usize % old;
                let t = x - x.floor();
                self.f[j] * (1.0 - t) + self.f[(j + 1) % old] * t
            })
            .collect();
        let mut q = Self::new(self.length, self.weight, self.alpha, self.p, f)?;
        q.orbit_volume = self.orbit_volume;
        Ok(q)
    }

    /// `∫ |u'|² + α u²` with forward differences.
    pub fn numerator(&self, u: &[f64]) -> f64 {
        let h = self.spacing();
        let m = u.len();
        let mut s = 0.0;
        for i in 0..m {
            let d = (u[(i + 1) % m] - u[i]) / h;
            s += d * d + self.alpha * u[i] * u[i];
        }
        self.weight * h * s
    }

    /// `E(u) = ∫ f |u|^{2♯}`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let q = self.two_sharp();
        self.weight * self.spacing() * u.iter().zip(&self.f).map(|(x, f)| f * x.abs().powf(q)).sum::<f64>()
    }

    /// `I(u) = numerator / E(u)^{2/2♯}`.
    pub fn quotient(&self, u: &[f64]) -> f64 {
        self.numerator(u) / self.energy(u).powf(2.0 / self.two_sharp())
    }

    /// Gradient of `I` with respect to the grid values.
    pub fn quotient_gradient(&self, u: &[f64]) -> Vec<f64> {
        let num = self.numerator(u);
        let e = self.energy(u);
        let q = self.two_sharp();
        let h = self.spacing();
        let lu = self.apply_l(u);
        let scale = 2.0 * self.weight * h / e.powf(2.0 / q);
        let lambda = num / e;
        lu.iter()
            .zip(u)
            .zip(&self.f)
            .map(|((l, x), f)| scale * (l - lambda * f * x.abs().powf(self.p - 1.0) * x))
            .collect()
    }

    /// `L u = -D² u + α u`.
    pub fn apply_l(&self, u: &[f64]) -> Vec<f64> {
        let h2 = self.spacing().powi(2);
        let m = u.len();
        (0..m)
            .map(|i| {
                (2.0 * u[i] - u[(i + m - 1) % m] - u[(i + 1) % m]) / h2 + self.alpha * u[i]
            })
            .collect()
    }

    /// `L u - f |u|^{p-1} u`.
    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        self.apply_l(u)
            .iter()
            .zip(u)
            .zip(&self.f)
            .map(|((l, x), f)| l - f * x.abs().powf(self.p - 1.0) * x)
            .collect()
    }

    /// `∫ u²`.
    pub fn l2_squared(&self, u: &[f64]) -> f64 {
        self.weight * self.spacing() * u.iter().map(|x| x * x).sum::<f64>()
    }
}
