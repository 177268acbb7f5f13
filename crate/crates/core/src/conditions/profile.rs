use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar statistics of a positive weight `f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FProfile {
    pub f_max: f64,
    pub f_min: f64,
    /// Average `∫f / V`.
    pub f_avg: f64,
    pub f_at_peak: f64,
    /// `Δf` at the maximum point (`Δ = -div ∇`).
    pub laplacian_at_peak: f64,
    /// Derivatives at the peak vanish through this order. A constant weight
    /// uses `u32::MAX`.
    pub vanishing_order: u32,
}

impl FProfile {
    pub fn new(
        f_max: f64,
        f_min: f64,
        f_avg: f64,
        laplacian_at_peak: f64,
        vanishing_order: u32,
    ) -> Result<Self> {
        let p = FProfile {
            f_max,
            f_min,
            f_avg,
            f_at_peak: f_max,
            laplacian_at_peak,
            vanishing_order,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(value, value, value, 0.0, u32::MAX)
    }

    /// Profile of a sampled weight on a uniform periodic grid. The Laplacian
    /// at the peak uses the three-point stencil; vanishing order is 1 unless
    /// the samples are constant.
    pub fn from_periodic_samples(samples: &[f64], spacing: f64) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::domain("need at least three samples"));
        }
        let (imax, &f_max) = samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        let f_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let f_avg = samples.iter().sum::<f64>() / samples.len() as f64;
        if f_min == f_max {
            return Self::constant(f_max);
        }
        let m = samples.len();
        let left = samples[(imax + m - 1) % m];
        let right = samples[(imax + 1) % m];
        let lap = -(left - 2.0 * f_max + right) / (spacing * spacing);
        Self::new(f_max, f_min, f_avg.clamp(f_min, f_max), lap, 1)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.f_max, self.f_min, self.f_avg, self.f_at_peak];
        if all.iter().any(|x| !x.is_finite()) || !self.laplacian_at_peak.is_finite() {
            return Err(Error::domain("weight statistics must be finite"));
        }
        if !(0.0 < self.f_min && self.f_min <= self.f_avg && self.f_avg <= self.f_max) {
            return Err(Error::domain(format!(
                "need 0 < min f <= <f> <= max f, got {} / {} / {}",
                self.f_min, self.f_avg, self.f_max
            )));
        }
        if self.f_at_peak != self.f_max {
            return Err(Error::domain("the peak value must equal max f"));
        }
        if self.vanishing_order == 0 {
            return Err(Error::domain(
                "first derivatives vanish at an interior maximum; vanishing order must be >= 1",
            ));
        }
        if self.vanishing_order >= 2 && self.laplacian_at_peak != 0.0 {
            return Err(Error::domain(
                "second derivatives vanish at the peak but the Laplacian is nonzero",
            ));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        self.f_min == self.f_max
    }

    /// `max f / <f>`.
    pub fn peak_ratio(&self) -> f64 {
        self.f_max / self.f_avg
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale must be positive, got {c}")));
        }
        let p = FProfile {
            f_max: self.f_max * c,
            f_min: self.f_min * c,
            f_avg: self.f_avg * c,
            f_at_peak: self.f_at_peak * c,
            laplacian_at_peak: self.laplacian_at_peak * c,
            vanishing_order: self.vanishing_order,
        };
        Ok(FProfile {
            f_avg: p.f_avg.clamp(p.f_min, p.f_max),
            ..p
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inconsistent_statistics() {
        assert!(FProfile::new(1.0, 2.0, 1.5, 0.0, 2).is_err());
        assert!(FProfile::new(2.0, 1.0, 3.0, 0.0, 2).is_err());
        assert!(FProfile::new(2.0, 0.0, 1.0, 0.0, 2).is_err());
        assert!(FProfile::new(2.0, 1.0, 1.5, 1.0, 2).is_err());
        assert!(FProfile::new(2.0, 1.0, 1.5, 1.0, 1).is_ok());
    }

    #[test]
    fn sampled_cosine_bump() {
        let m = 400;
        let l = 2.0 * std::f64::consts::PI;
        let h = l / m as f64;
        let s: Vec<f64> = (0..m).map(|i| 2.0 + (i as f64 * h).cos()).collect();
        let p = FProfile::from_periodic_samples(&s, h).unwrap();
        assert_eq!(p.f_max, 3.0);
        assert!((p.f_avg - 2.0).abs() < 1e-12);
        // -f'' at the peak of cos is +1.
        assert!((p.laplacian_at_peak - 1.0).abs() < 1e-4);
    }
}
