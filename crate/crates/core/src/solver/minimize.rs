//! Multi-start minimization of the discrete quotient followed by Newton
//! polishing of the Euler–Lagrange equation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{minres, sup_norm, PeriodicOperator};
use super::problem::ReducedProblem;
use crate::constants::sobolev_constant;
use crate::error::{Error, Result};

/// Environment variable holding the worker thread count for multi-start runs.
pub const THREADS_ENV: &str = "MULTICRIT_THREADS";

/// Relative spread `(max - min)/max` below which a solution counts as constant.
pub const CONSTANT_SPREAD: f64 = 1e-6;

/// What the reported quotient value means.
pub const QUOTIENT_NOTE: &str = "upper bound for the invariant infimum";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Constant,
    Nonconstant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Sup-norm tolerance on the Euler–Lagrange residual.
    pub tol: f64,
    pub max_newton: usize,
    pub max_descent: usize,
    /// Relative size of the preconditioned gradient at which descent hands
    /// over to Newton.
    pub descent_tol: f64,
    pub seed: u64,
    pub random_starts: usize,
    /// Cosine modes used as perturbed starts.
    pub modes: Vec<u32>,
    pub amplitude: f64,
    /// Worker threads; `None` reads the environment, falling back to 1.
    pub threads: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_newton: 50,
            max_descent: 5000,
            descent_tol: 1e-7,
            seed: 0,
            random_starts: 1,
            modes: vec![1, 2, 3],
            amplitude: 0.3,
            threads: None,
        }
    }
}

impl SolverConfig {
    pub fn thread_count(&self) -> usize {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
            .unwrap_or(1)
            .max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub u: Vec<f64>,
    /// `I(u)`; see [`QUOTIENT_NOTE`].
    pub quotient: f64,
    pub quotient_note: String,
    /// `E(u) = ∫ f u^{2♯}`.
    pub energy: f64,
    /// Sup norm of `L u - f u^p`.
    pub el_residual: f64,
    pub classification: Classification,
    pub converged: bool,
    pub start: String,
    pub seed: u64,
    pub descent_iterations: usize,
    pub newton_iterations: usize,
    /// Existence threshold for the problem's orbit volume, when known.
    pub threshold: Option<f64>,
    pub below_threshold: Option<bool>,
    pub grid: usize,
    pub length: f64,
    pub alpha: f64,
}

impl SolveReport {
    pub fn max(&self) -> f64 {
        self.u.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.u.iter().cloned().fold(f64::MAX, f64::min)
    }
}

fn classify(u: &[f64]) -> Classification {
    let max = u.iter().cloned().fold(f64::MIN, f64::max);
    let min = u.iter().cloned().fold(f64::MAX, f64::min);
    if (max - min) <= CONSTANT_SPREAD * max.abs() {
        Classification::Constant
    } else {
        Classification::Nonconstant
    }
}

/// Threshold `A^{2/m}/(K_m (max f)^{2/2♯})` when the effective dimension is
/// an integer and the orbit volume is known.
pub fn problem_threshold(problem: &ReducedProblem) -> Option<f64> {
    let a = problem.orbit_volume?;
    let m = problem.reduced_dim();
    let mi = m.round();
    if (m - mi).abs() > 1e-9 || mi < 3.0 {
        return None;
    }
    let k = sobolev_constant(mi as u32).ok()?;
    Some(a.powf(2.0 / mi) / (k * problem.f_max().powf(2.0 / problem.two_sharp())))
}

fn make_report(
    problem: &ReducedProblem,
    u: Vec<f64>,
    converged: bool,
    start: &str,
    seed: u64,
    descent_iterations: usize,
    newton_iterations: usize,
) -> SolveReport {
    let quotient = problem.quotient(&u);
    let threshold = problem_threshold(problem);
    SolveReport {
        quotient,
        quotient_note: QUOTIENT_NOTE.to_string(),
        energy: problem.energy(&u),
        el_residual: sup_norm(&problem.residual(&u)),
        classification: classify(&u),
        converged,
        start: start.to_string(),
        seed,
        descent_iterations,
        newton_iterations,
        threshold,
        below_threshold: threshold.map(|t| quotient < t),
        grid: u.len(),
        length: problem.length,
        alpha: problem.alpha,
        u,
    }
}

/// The constant solution `ū = (α/f)^{1/(p-1)}`; requires constant f.
pub fn constant_solution(problem: &ReducedProblem) -> Result<SolveReport> {
    if !problem.is_constant_f() {
        return Err(Error::precondition("constant solution requires constant f"));
    }
    let c = (problem.alpha / problem.f[0]).powf(1.0 / (problem.p - 1.0));
    let u = vec![c; problem.grid()];
    let converged = sup_norm(&problem.residual(&u)) < 1e-10 * c.max(1.0);
    Ok(make_report(problem, u, converged, "constant", 0, 0, 0))
}

fn nonlinearity(problem: &ReducedProblem, u: &[f64]) -> Vec<f64> {
    u.iter()
        .zip(&problem.f)
        .map(|(x, f)| f * x.abs().powf(problem.p - 1.0) * x)
        .collect()
}

fn normalize(problem: &ReducedProblem, u: &mut [f64]) {
    let e = problem.energy(u);
    let s = e.powf(-1.0 / problem.two_sharp());
    for x in u.iter_mut() {
        *x *= s;
    }
}

/// Sobolev-preconditioned descent on the constraint `E(u) = 1`:
/// `u ← (1-τ)u + τ λ L⁻¹(f u^p)` with `λ = N(u)/E(u)` and backtracking on I.
/// Returns the rescaled iterate `λ^{1/(p-1)} u` and the iteration count.
fn descend(
    problem: &ReducedProblem,
    op: &PeriodicOperator,
    u0: &[f64],
    cfg: &SolverConfig,
) -> (Vec<f64>, usize) {
    let mut u: Vec<f64> = u0.iter().map(|x| x.abs()).collect();
    normalize(problem, &mut u);
    let mut value = problem.quotient(&u);
    let mut its = 0;
    while its < cfg.max_descent {
        its += 1;
        let lambda = problem.numerator(&u) / problem.energy(&u);
        let target: Vec<f64> = op.solve(&nonlinearity(problem, &u)).iter().map(|z| lambda * z).collect();
        let gap = u.iter().zip(&target).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if gap <= cfg.descent_tol * sup_norm(&u) {
            break;
        }
        let mut tau = 1.0;
        let mut accepted = false;
        while tau > 1e-8 {
            let mut cand: Vec<f64> = u.iter().zip(&target).map(|(a, b)| (1.0 - tau) * a + tau * b).collect();
            normalize(problem, &mut cand);
            let cv = problem.quotient(&cand);
            if cv <= value * (1.0 + 4.0 * f64::EPSILON) {
                u = cand;
                value = cv;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let lambda = problem.numerator(&u) / problem.energy(&u);
    let s = lambda.powf(1.0 / (problem.p - 1.0));
    (u.iter().map(|x| s * x).collect(), its)
}

/// Damped Newton on `L v = f v^p`; returns the iterate, whether the
/// tolerance was met, and the iteration count.
fn newton(
    problem: &ReducedProblem,
    op: &PeriodicOperator,
    mut v: Vec<f64>,
    cfg: &SolverConfig,
) -> (Vec<f64>, bool, usize) {
    let m = v.len();
    let mut res = problem.residual(&v);
    let mut r = sup_norm(&res);
    for it in 0..cfg.max_newton {
        if r < cfg.tol {
            return (v, true, it);
        }
        let pot: Vec<f64> = v
            .iter()
            .zip(&problem.f)
            .map(|(x, f)| problem.p * f * x.abs().powf(problem.p - 1.0))
            .collect();
        let jac = |x: &[f64]| {
            let mut out = op.apply(x);
            for ((o, q), xi) in out.iter_mut().zip(&pot).zip(x) {
                *o -= q * xi;
            }
            out
        };
        let rhs: Vec<f64> = res.iter().map(|x| -x).collect();
        let (d, _) = minres(jac, |x| op.solve(x), &rhs, 1e-13, 4 * m);
        let mut step = 1.0;
        let mut improved = false;
        while step > 1e-4 {
            let cand: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            if cand.iter().all(|x| *x > 0.0) {
                let cres = problem.residual(&cand);
                let cr = sup_norm(&cres);
                if cr < r {
                    v = cand;
                    res = cres;
                    r = cr;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            return (v, r < cfg.tol, it + 1);
        }
    }
    (v, r < cfg.tol, cfg.max_newton)
}

/// Smallest grid the minimizer accepts; coarser grids misplace the
/// bifurcation from the constant branch by more than a sweep step.
pub const MIN_GRID: usize = 64;

fn check_grid(problem: &ReducedProblem) -> Result<()> {
    if problem.grid() < MIN_GRID {
        return Err(Error::precondition(format!(
            "minimization needs at least {MIN_GRID} grid points, got {}",
            problem.grid()
        )));
    }
    Ok(())
}

/// Minimizes from a single start and polishes with Newton.
pub fn minimize_from(
    problem: &ReducedProblem,
    u0: &[f64],
    cfg: &SolverConfig,
    label: &str,
) -> Result<SolveReport> {
    check_grid(problem)?;
    if u0.len() != problem.grid() {
        return Err(Error::domain(format!(
            "start has {} points, grid has {}",
            u0.len(),
            problem.grid()
        )));
    }
    if u0.iter().all(|x| *x == 0.0) || u0.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("start must be finite and not identically zero"));
    }
    let op = PeriodicOperator::new(problem.grid(), problem.spacing(), problem.alpha);
    Ok(run_start(problem, &op, u0, cfg, label))
}

fn run_start(
    problem: &ReducedProblem,
    op: &PeriodicOperator,
    u0: &[f64],
    cfg: &SolverConfig,
    label: &str,
) -> SolveReport {
    let (v, d_its) = descend(problem, op, u0, cfg);
    let (v, ok, n_its) = newton(problem, op, v, cfg);
    make_report(problem, v, ok, label, cfg.seed, d_its, n_its)
}

/// The start profiles: constant, cosine perturbations, seeded random.
pub fn start_profiles(problem: &ReducedProblem, cfg: &SolverConfig) -> Vec<(String, Vec<f64>)> {
    let m = problem.grid();
    let c = (problem.alpha / problem.f_mean()).powf(1.0 / (problem.p - 1.0));
    let mut out = vec![("constant".to_string(), vec![c; m])];
    for &k in &cfg.modes {
        let u = (0..m)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * f64::from(k) * i as f64 / m as f64;
                c * (1.0 + cfg.amplitude * theta.cos())
            })
            .collect();
        out.push((format!("cos-{k}"), u));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for j in 0..cfg.random_starts {
        let u = (0..m)
            .map(|_| c * (1.0 + cfg.amplitude * (2.0 * rng.random::<f64>() - 1.0)))
            .collect();
        out.push((format!("random-{j}"), u));
    }
    out
}

/// Multi-start minimization. Returns the converged report with the lowest
/// quotient; if no start converges, a convergence error carrying the report
/// with the smallest residual.
pub fn minimize(problem: &ReducedProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    check_grid(problem)?;
    let op = PeriodicOperator::new(problem.grid(), problem.spacing(), problem.alpha);
    let starts = start_profiles(problem, cfg);
    let threads = cfg.thread_count().min(starts.len());
    let reports: Vec<SolveReport> = if threads <= 1 {
        starts.iter().map(|(l, u)| run_start(problem, &op, u, cfg, l)).collect()
    } else {
        let chunk = starts.len().div_ceil(threads);
        std::thread::scope(|s| {
            let handles: Vec<_> = starts
                .chunks(chunk)
                .map(|part| {
                    let op = &op;
                    s.spawn(move || {
                        part.iter()
                            .map(|(l, u)| run_start(problem, op, u, cfg, l))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("solver worker panicked"))
                .collect()
        })
    };
    let best = reports
        .iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.quotient.total_cmp(&b.quotient));
    match best {
        Some(r) => Ok(r.clone()),
        None => {
            let r = reports
                .into_iter()
                .min_by(|a, b| a.el_residual.total_cmp(&b.el_residual))
                .expect("at least one start");
            Err(Error::Convergence {
                message: format!("no start reached residual {:e}", cfg.tol),
                best: Box::new(r),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_regime_returns_constant() {
        // (p-1)α = 0.4 < (2π/ℓ)² = 1.
        let p = ReducedProblem::constant_f(2.0 * std::f64::consts::PI, 1.0, 0.1, 5.0, 128).unwrap();
        let r = minimize(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::Constant);
        assert!(r.el_residual < 1e-10);
    }

    #[test]
    fn nonconstant_regime() {
        let p = ReducedProblem::constant_f(2.0 * std::f64::consts::PI, 1.0, 1.0, 5.0, 256).unwrap();
        let r = minimize(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::Nonconstant);
        let c = constant_solution(&p).unwrap();
        assert!(r.quotient < c.quotient);
    }
}
