//! Axisymmetric force-free eigenfield of the unit ball.
//!
//! With `f(r) = j₁(λr)/r`, the toroidal part is `T = f·(-y, x, 0)` and the
//! poloidal part is `P = curl T = (-xz f'/r, -yz f'/r, 2f + (x² + y²) f'/r)`.
//! Since `T = ẑ × ∇F` with `F = -j₀(λr)/λ` solving the Helmholtz equation,
//! `curl P = λ² T`, so `u = T + P/λ` satisfies `curl u = λu` and `div u = 0`.
//! On the sphere `x·u = 2zf(1)/λ`, which vanishes when `j₁(λ) = 0`.

use crate::error::{Error, Result};
use crate::fields::FieldSampler;
use crate::geometry::Vec3;
use crate::linalg::roots::{spherical_j1_over_x, spherical_j1_over_x_deriv_over_x};

#[derive(Debug, Clone, Copy)]
pub struct Spheromak {
    pub lambda: f64,
    /// Factor making `max |u| = 1` on the closed unit ball.
    pub scale: f64,
}

fn raw(lambda: f64, x: &Vec3) -> Vec3 {
    let r = x.norm();
    let s = lambda * r;
    let f = lambda * spherical_j1_over_x(s);
    let fr = lambda.powi(3) * spherical_j1_over_x_deriv_over_x(s);
    let t = Vec3::new(-x.y * f, x.x * f, 0.0);
    let p = Vec3::new(
        -x.x * x.z * fr,
        -x.y * x.z * fr,
        2.0 * f + (x.x * x.x + x.y * x.y) * fr,
    );
    t + p / lambda
}

/// Largest `|u|` over the ball, located on a meridian-plane grid and then
/// polished by successive local grid refinement (the field is axisymmetric).
fn max_norm(lambda: f64) -> f64 {
    let at = |rho: f64, z: f64| raw(lambda, &Vec3::new(rho, 0.0, z)).norm();
    let inside = |rho: f64, z: f64| rho >= 0.0 && rho * rho + z * z <= 1.0;
    let n = 200;
    let mut best = (0.0, 0.0, at(0.0, 0.0));
    for i in 0..=n {
        for j in 0..=2 * n {
            let (rho, z) = (i as f64 / n as f64, -1.0 + j as f64 / n as f64);
            if inside(rho, z) {
                let v = at(rho, z);
                if v > best.2 {
                    best = (rho, z, v);
                }
            }
        }
    }
    let mut h = 1.0 / n as f64;
    for _ in 0..30 {
        let (r0, z0, _) = best;
        for a in -4..=4 {
            for b in -4..=4 {
                let (rho, z) = (r0 + a as f64 * h / 4.0, z0 + b as f64 * h / 4.0);
                let (rho, z) = if inside(rho, z) {
                    (rho, z)
                } else {
                    // Pull the candidate back onto the sphere.
                    let rr = (rho.max(0.0).powi(2) + z * z).sqrt();
                    (rho.max(0.0) / rr, z / rr)
                };
                let v = at(rho, z);
                if v > best.2 {
                    best = (rho, z, v);
                }
            }
        }
        h /= 2.0;
    }
    best.2
}

pub fn make_spheromak(lambda: f64) -> Result<Spheromak> {
    if !(lambda > 0.0) || lambda > 12.0 {
        return Err(Error::InvalidInput(format!("spheromak needs 0 < lambda <= 12, got {lambda}")));
    }
    Ok(Spheromak { lambda, scale: 1.0 / max_norm(lambda) })
}

impl FieldSampler for Spheromak {
    fn dim(&self) -> usize {
        3
    }
    fn value(&self, x: &Vec3) -> Vec3 {
        raw(self.lambda, x) * self.scale
    }
    fn curl(&self, x: &Vec3) -> Option<Vec3> {
        Some(self.value(x) * self.lambda)
    }
    fn div(&self, _x: &Vec3) -> Option<f64> {
        Some(0.0)
    }
    fn tag(&self) -> String {
        format!("spheromak:{}", self.lambda)
    }
}
