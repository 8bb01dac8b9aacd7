use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::fields::WeightFunction;
use crate::geometry::Vec3;

/// `φ = |x|^{2-α}/(2-α)` (`ln|x|` at `α = 2`), so that `∇φ = x/|x|^α`.
#[derive(Debug, Clone, Copy)]
pub struct PowerWeight {
    pub alpha: f64,
    pub dim: usize,
}

pub fn make_power_weight(alpha: f64) -> Result<PowerWeight> {
    PowerWeight::new(alpha, 3)
}

impl PowerWeight {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!("power weight needs alpha >= 0, got {alpha}")));
        }
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidInput(format!("weight dimension {dim}")));
        }
        Ok(Self { alpha, dim })
    }

    fn planar(&self, x: &Vec3) -> Vec3 {
        if self.dim == 2 {
            Vec3::new(x.x, x.y, 0.0)
        } else {
            *x
        }
    }

    fn radius(&self, x: &Vec3) -> Result<f64> {
        let r = self.planar(x).norm();
        if r == 0.0 && self.alpha > 0.0 {
            return Err(Error::WeightAtOrigin { alpha: self.alpha });
        }
        Ok(r)
    }

    /// `|x|^{-α}`, equal to 1 for `α = 0` (including at the origin).
    fn inv_pow(&self, r: f64) -> f64 {
        if self.alpha == 0.0 {
            1.0
        } else {
            r.powf(-self.alpha)
        }
    }
}

impl WeightFunction for PowerWeight {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vec3) -> Result<f64> {
        let r = self.radius(x)?;
        Ok(if self.alpha == 2.0 {
            r.ln()
        } else {
            r.powf(2.0 - self.alpha) / (2.0 - self.alpha)
        })
    }

    fn grad(&self, x: &Vec3) -> Result<Vec3> {
        let r = self.radius(x)?;
        Ok(self.planar(x) * self.inv_pow(r))
    }

    fn hessian(&self, x: &Vec3) -> Result<Matrix3<f64>> {
        let r = self.radius(x)?;
        let p = self.planar(x);
        let s = self.inv_pow(r);
        let mut h = Matrix3::zeros();
        for i in 0..self.dim {
            h[(i, i)] = s;
        }
        if self.alpha != 0.0 {
            h -= p * p.transpose() * (self.alpha * s / (r * r));
        }
        Ok(h)
    }

    fn laplacian(&self, x: &Vec3) -> Result<f64> {
        let r = self.radius(x)?;
        Ok((self.dim as f64 - self.alpha) * self.inv_pow(r))
    }

    fn tag(&self) -> String {
        format!("power:{}", self.alpha)
    }
}
