//! Rayleigh quotients of concentrating test functions on radial model
//! quotients, and fits of their small-ε expansion.
//!
//! The quotient density is `ρ(r) = A (1 - q r²/(2N)) σ(r)`, so that the
//! fibre volume has Laplacian `qA` at the centre (with `Δ = -div ∇`), and
//! `f(r) = f₀ - Δf r²/(2N)`.

pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::constants::{sobolev_constant, sphere_volume};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityModel {
    Euclidean,
    /// Geodesic spheres of a round sphere with the given sectional curvature.
    RoundSphere { curvature: f64 },
}

impl DensityModel {
    /// Scalar curvature of the model in dimension `n`.
    pub fn scalar_curvature(&self, n: u32) -> f64 {
        match self {
            DensityModel::Euclidean => 0.0,
            DensityModel::RoundSphere { curvature } => {
                f64::from(n) * f64::from(n - 1) * curvature
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConfig {
    /// Quotient dimension `N = n - k`.
    pub n: u32,
    pub delta: f64,
    pub alpha: f64,
    /// Fibre volume at the centre.
    pub a: f64,
    pub density: DensityModel,
    /// Quadratic coefficient of the fibre volume.
    pub q: f64,
    pub f0: f64,
    /// `Δf` at the centre.
    pub lap_f: f64,
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    pub quad_tol: f64,
}

/// Log-spaced ε values from `hi·δ²` down to `lo·δ²`.
pub fn log_window(delta: f64, hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let d2 = delta * delta;
    let (lh, ll) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| d2 * (lh + (ll - lh) * i as f64 / (count - 1).max(1) as f64).exp())
        .collect()
}

impl ExpansionConfig {
    /// Euclidean model, `A = 1`, `f ≡ 1`, `q = 0`, δ = 1 and the default
    /// window `ε ∈ [1e-6, 1e-3]·δ²`.
    pub fn euclidean(n: u32, alpha: f64) -> Self {
        ExpansionConfig {
            n,
            delta: 1.0,
            alpha,
            a: 1.0,
            density: DensityModel::Euclidean,
            q: 0.0,
            f0: 1.0,
            lap_f: 0.0,
            epsilons: log_window(1.0, 1e-3, 1e-6, 16),
            quad_tol: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::domain(format!("dimension must be at least 3, got {}", self.n)));
        }
        for (name, v) in [("delta", self.delta), ("alpha", self.alpha), ("A", self.a), ("f0", self.f0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.quad_tol > 0.0 && self.quad_tol < 1e-3) {
            return Err(Error::domain(format!("quadrature tolerance {} out of range", self.quad_tol)));
        }
        let nn = f64::from(self.n);
        let d2 = self.delta * self.delta;
        if !(1.0 - self.q * d2 / (2.0 * nn) > 0.0) {
            return Err(Error::precondition("fibre volume must stay positive on [0, δ]"));
        }
        if !(self.f0 - self.lap_f.max(0.0) * d2 / (2.0 * nn) > 0.0) {
            return Err(Error::precondition("f must stay positive on [0, δ]"));
        }
        if let DensityModel::RoundSphere { curvature } = self.density {
            if !(curvature > 0.0 && curvature.is_finite()) {
                return Err(Error::domain("curvature must be positive"));
            }
            if !(self.delta * curvature.sqrt() < std::f64::consts::PI) {
                return Err(Error::precondition("δ must be below the conjugate radius"));
            }
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::domain("epsilons must be positive"));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::precondition("epsilons must be strictly decreasing"));
        }
        if self.epsilons.first().is_some_and(|e| *e > 1e-2 * d2) {
            return Err(Error::precondition("epsilons must be much smaller than δ²"));
        }
        Ok(())
    }

    fn two_sharp(&self) -> f64 {
        let nn = f64::from(self.n);
        2.0 * nn / (nn - 2.0)
    }

    fn sigma(&self, r: f64) -> f64 {
        let e = i32::try_from(self.n - 1).expect("small dimension");
        match self.density {
            DensityModel::Euclidean => r.powi(e),
            DensityModel::RoundSphere { curvature } => {
                let s = curvature.sqrt();
                ((s * r).sin() / s).powi(e)
            }
        }
    }

    fn rho(&self, r: f64) -> f64 {
        self.a * (1.0 - self.q * r * r / (2.0 * f64::from(self.n))) * self.sigma(r)
    }

    fn f(&self, r: f64) -> f64 {
        self.f0 - self.lap_f * r * r / (2.0 * f64::from(self.n))
    }

    /// `A^{2/N} / (K_N f₀^{2/2♯})`.
    pub fn predicted_limit(&self) -> Result<f64> {
        let nn = f64::from(self.n);
        Ok(self.a.powf(2.0 / nn) / (sobolev_constant(self.n)? * self.f0.powf(2.0 / self.two_sharp())))
    }

    /// First-order coefficient `c₁` in `I(u_ε) = limit·(1 + c₁ε + o(ε))`,
    /// defined for `N > 4`.
    pub fn predicted_c1(&self) -> Result<f64> {
        if self.n <= 4 {
            return Err(Error::hypothesis(format!(
                "first-order coefficient needs N > 4, got {}",
                self.n
            )));
        }
        let nn = f64::from(self.n);
        let s = self.density.scalar_curvature(self.n);
        Ok((4.0 * (nn - 1.0) * self.alpha / (nn - 2.0) + (nn - 4.0) * self.lap_f / (2.0 * self.f0)
            - 3.0 * self.q
            - s)
            / (nn * (nn - 4.0)))
    }

    /// Combination whose sign governs the first correction in every
    /// dimension: `4(N-1)α/(N-2) + (N-4)Δf/(2f₀) - 3q - S`.
    pub fn correction_driver(&self) -> f64 {
        let nn = f64::from(self.n);
        4.0 * (nn - 1.0) * self.alpha / (nn - 2.0) + (nn - 4.0) * self.lap_f / (2.0 * self.f0)
            - 3.0 * self.q
            - self.density.scalar_curvature(self.n)
    }
}

/// `(ε + r²)^{1-N/2} - (ε + δ²)^{1-N/2}`.
pub fn test_function(epsilon: f64, delta: f64, n: u32, r: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !(r >= 0.0 && r <= delta) || n < 3 {
        return Err(Error::domain(format!(
            "need ε > 0, 0 ≤ r ≤ δ and N ≥ 3 (ε={epsilon}, r={r}, δ={delta}, N={n})"
        )));
    }
    let e = 1.0 - f64::from(n) / 2.0;
    Ok((epsilon + r * r).powf(e) - (epsilon + delta * delta).powf(e))
}

/// `I(u_ε)` on the model quotient, by adaptive quadrature.
pub fn rayleigh_quotient(config: &ExpansionConfig, epsilon: f64) -> Result<f64> {
    config.validate()?;
    rayleigh_quotient_tol(config, epsilon, config.quad_tol)
}

fn rayleigh_quotient_tol(config: &ExpansionConfig, epsilon: f64, tol: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("ε must be positive"));
    }
    let nn = f64::from(config.n);
    let d = config.delta;
    let e = 1.0 - nn / 2.0;
    // Rescale by ε^{(N-2)/2}; the quotient is homogeneous of degree zero.
    let scale = epsilon.powf((nn - 2.0) / 2.0);
    let tail = (epsilon + d * d).powf(e);
    let u = |r: f64| scale * ((epsilon + r * r).powf(e) - tail);
    let du = |r: f64| scale * (2.0 - nn) * r * (epsilon + r * r).powf(-nn / 2.0);
    let q = config.two_sharp();
    let root = epsilon.sqrt();
    let breaks: Vec<f64> = [0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0]
        .iter()
        .map(|k| k * root)
        .collect();
    let num = quadrature::integrate(
        |r| {
            let (v, dv) = (u(r), du(r));
            (dv * dv + config.alpha * v * v) * config.rho(r)
        },
        0.0,
        d,
        &breaks,
        tol,
    )?;
    let den = quadrature::integrate(
        |r| config.f(r) * u(r).max(0.0).powf(q) * config.rho(r),
        0.0,
        d,
        &breaks,
        tol,
    )?;
    let omega = sphere_volume(config.n - 1)?;
    Ok(omega * num / (omega * den).powf(2.0 / q))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub limit_fitted: f64,
    pub limit_predicted: f64,
    pub c1_fitted: f64,
    pub c1_predicted: f64,
    /// `[ε_min, ε_max]`.
    pub window: [f64; 2],
    /// `(ε, I(u_ε))`.
    pub samples: Vec<(f64, f64)>,
}

/// Least squares `y ≈ Σ c_j b_j(x)` by modified Gram–Schmidt.
fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let k = columns.len();
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        for i in 0..j {
            let d: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = d;
            let qi = q[i].clone();
            for (x, y) in q[j].iter_mut().zip(&qi) {
                *x -= d * y;
            }
        }
        let norm = q[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Numeric("rank-deficient fit".into()));
        }
        r[j][j] = norm;
        for x in q[j].iter_mut() {
            *x /= norm;
        }
    }
    let qty: Vec<f64> = q.iter().map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut c = vec![0.0; k];
    for j in (0..k).rev() {
        let s: f64 = (j + 1..k).map(|i| r[j][i] * c[i]).sum();
        c[j] = (qty[j] - s) / r[j][j];
    }
    Ok(c)
}

fn sample(config: &ExpansionConfig) -> Result<Vec<(f64, f64)>> {
    config
        .epsilons
        .iter()
        .map(|&e| rayleigh_quotient_tol(config, e, config.quad_tol).map(|v| (e, v)))
        .collect()
}

/// Fits `I(u_ε) ≈ a + bε + cε²` over the configured window (`N > 4`).
/// `c1_fitted = b/a`.
pub fn fit_and_compare(config: &ExpansionConfig) -> Result<ExpansionFit> {
    config.validate()?;
    if config.epsilons.len() < 4 {
        return Err(Error::precondition(format!(
            "need at least 4 epsilons, got {}",
            config.epsilons.len()
        )));
    }
    let c1_predicted = config.predicted_c1()?;
    let samples = sample(config)?;
    let emax = config.epsilons[0];
    let xs: Vec<f64> = samples.iter().map(|s| s.0 / emax).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let cols = vec![vec![1.0; xs.len()], xs.clone(), xs.iter().map(|x| x * x).collect()];
    let c = least_squares(&cols, &ys)?;
    Ok(ExpansionFit {
        limit_fitted: c[0],
        limit_predicted: config.predicted_limit()?,
        c1_fitted: c[1] / (emax * c[0]),
        c1_predicted,
        window: [*config.epsilons.last().expect("nonempty"), emax],
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogBranchFit {
    pub limit_fitted: f64,
    pub limit_predicted: f64,
    /// Relative coefficient of `ε ln ε`.
    pub log_coeff_fitted: f64,
    /// Expected sign of that coefficient: opposite to the correction driver.
    pub log_coeff_sign_predicted: f64,
    pub window: [f64; 2],
    pub samples: Vec<(f64, f64)>,
}

/// `N = 4`: fits `I(u_ε) ≈ a + b ε ln ε + c ε`. Only the sign of `b` is
/// meaningful at this precision.
pub fn fit_log_branch(config: &ExpansionConfig) -> Result<LogBranchFit> {
    config.validate()?;
    if config.n != 4 {
        return Err(Error::hypothesis(format!("log branch is N = 4, got {}", config.n)));
    }
    if config.epsilons.len() < 4 {
        return Err(Error::precondition("need at least 4 epsilons"));
    }
    let samples = sample(config)?;
    let emax = config.epsilons[0];
    let xs: Vec<f64> = samples.iter().map(|s| s.0 / emax).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    // ε ln ε = emax·x·(ln x + ln emax)
    let cols = vec![
        vec![1.0; xs.len()],
        xs.iter().map(|x| x * (x.ln() + emax.ln())).collect(),
        xs.clone(),
    ];
    let c = least_squares(&cols, &ys)?;
    Ok(LogBranchFit {
        limit_fitted: c[0],
        limit_predicted: config.predicted_limit()?,
        log_coeff_fitted: c[1] / (emax * c[0]),
        log_coeff_sign_predicted: -config.correction_driver().signum(),
        window: [*config.epsilons.last().expect("nonempty"), emax],
        samples,
    })
}
