//! Linear algebra on uniform periodic grids: the operator `L = -D² + α`
//! (three-point stencil, periodic wrap) and a preconditioned MINRES for the
//! symmetric indefinite Newton systems.

/// `L = -D² + α` on `m` periodic points with spacing `h`, factored once.
#[derive(Clone, Debug)]
pub struct PeriodicOperator {
    m: usize,
    diag: f64,
    off: f64,
    // Thomas factorization of the Sherman–Morrison-modified tridiagonal part.
    upper: Vec<f64>,
    pivots: Vec<f64>,
    corner: Vec<f64>,
    corner_scale: f64,
    gamma: f64,
}

impl PeriodicOperator {
    pub fn new(m: usize, h: f64, alpha: f64) -> Self {
        assert!(m >= 3, "periodic grid needs at least three points");
        let diag = 2.0 / (h * h) + alpha;
        let off = -1.0 / (h * h);
        let gamma = -diag;
        let mut b = vec![diag; m];
        b[0] -= gamma;
        b[m - 1] -= off * off / gamma;
        let mut upper = vec![0.0; m];
        let mut pivots = vec![0.0; m];
        pivots[0] = b[0];
        upper[0] = off / pivots[0];
        for i in 1..m {
            pivots[i] = b[i] - off * upper[i - 1];
            upper[i] = off / pivots[i];
        }
        let mut op = PeriodicOperator {
            m,
            diag,
            off,
            upper,
            pivots,
            corner: Vec::new(),
            corner_scale: 0.0,
            gamma,
        };
        let mut u = vec![0.0; m];
        u[0] = gamma;
        u[m - 1] = off;
        let z = op.solve_banded(&u);
        op.corner_scale = 1.0 + z[0] + off / gamma * z[m - 1];
        op.corner = z;
        op
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|i| {
                let l = u[(i + m - 1) % m];
                let r = u[(i + 1) % m];
                self.diag * u[i] + self.off * (l + r)
            })
            .collect()
    }

    fn solve_banded(&self, r: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        y[0] = r[0] / self.pivots[0];
        for i in 1..m {
            y[i] = (r[i] - self.off * y[i - 1]) / self.pivots[i];
        }
        for i in (0..m - 1).rev() {
            y[i] -= self.upper[i] * y[i + 1];
        }
        y
    }

    /// `L⁻¹ r`.
    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = self.solve_banded(r);
        let vy = y[0] + self.off / self.gamma * y[m - 1];
        let s = vy / self.corner_scale;
        for (yi, zi) in y.iter_mut().zip(&self.corner) {
            *yi -= s * zi;
        }
        y
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sup_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Preconditioned MINRES for a symmetric (possibly indefinite, possibly
/// nearly singular) system `A x = b`, with a symmetric positive definite
/// preconditioner. Returns the iterate and the number of iterations.
pub fn minres(
    apply_a: impl Fn(&[f64]) -> Vec<f64>,
    precond: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    rtol: f64,
    max_iter: usize,
) -> (Vec<f64>, usize) {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r1 = b.to_vec();
    let mut y = precond(&r1);
    let beta1 = dot(&r1, &y).max(0.0).sqrt();
    if beta1 == 0.0 {
        return (x, 0);
    }
    let mut oldb = 0.0;
    let mut beta = beta1;
    let mut dbar = 0.0;
    let mut epsln = 0.0;
    let mut phibar = beta1;
    let mut cs = -1.0;
    let mut sn = 0.0;
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut r2 = r1.clone();
    let mut itn = 0;
    while itn < max_iter {
        itn += 1;
        let s = 1.0 / beta;
        let v: Vec<f64> = y.iter().map(|yi| s * yi).collect();
        y = apply_a(&v);
        if itn >= 2 {
            let c = beta / oldb;
            for (yi, ri) in y.iter_mut().zip(&r1) {
                *yi -= c * ri;
            }
        }
        let alfa = dot(&v, &y);
        let c = alfa / beta;
        for (yi, ri) in y.iter_mut().zip(&r2) {
            *yi -= c * ri;
        }
        r1 = std::mem::replace(&mut r2, y);
        y = precond(&r2);
        oldb = beta;
        beta = dot(&r2, &y).max(0.0).sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;
        let denom = 1.0 / gamma;
        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        w = v
            .iter()
            .zip(&w1)
            .zip(&w2)
            .map(|((vi, a), b)| (vi - oldeps * a - delta * b) * denom)
            .collect();
        for (xi, wi) in x.iter_mut().zip(&w) {
            *xi += phi * wi;
        }
        if phibar <= rtol * beta1 || beta == 0.0 {
            break;
        }
    }
    (x, itn)
}
