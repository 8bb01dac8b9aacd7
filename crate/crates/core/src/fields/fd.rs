//! Central finite-difference oracles.

use nalgebra::Matrix3;

use crate::fields::FieldSampler;
use crate::geometry::Vec3;

pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// `J[i][j] = ∂u_i/∂x_j` by central differences (planar fields skip `x₃`).
pub fn fd_jacobian(field: &dyn FieldSampler, x: &Vec3, h: f64) -> Matrix3<f64> {
    let mut j = Matrix3::zeros();
    for k in 0..field.dim() {
        let mut e = Vec3::zeros();
        e[k] = h;
        let d = (field.value(&(x + e)) - field.value(&(x - e))) / (2.0 * h);
        j.set_column(k, &d);
    }
    j
}

pub fn fd_curl(field: &dyn FieldSampler, x: &Vec3, h: f64) -> Vec3 {
    let j = fd_jacobian(field, x, h);
    curl_of_jacobian(&j, field.dim())
}

pub fn fd_div(field: &dyn FieldSampler, x: &Vec3, h: f64) -> f64 {
    let j = fd_jacobian(field, x, h);
    (0..field.dim()).map(|k| j[(k, k)]).sum()
}

pub fn curl_of_jacobian(j: &Matrix3<f64>, dim: usize) -> Vec3 {
    let c = Vec3::new(j[(2, 1)] - j[(1, 2)], j[(0, 2)] - j[(2, 0)], j[(1, 0)] - j[(0, 1)]);
    if dim == 2 {
        Vec3::new(0.0, 0.0, c.z)
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FnField;

    #[test]
    fn constant_field_has_zero_derivatives() {
        let f = FnField { dim: 3, f: |_: &Vec3| Vec3::new(1.0, 2.0, 3.0), name: "c".into() };
        let x = Vec3::new(0.3, -0.2, 0.9);
        assert_eq!(fd_curl(&f, &x, 1e-4), Vec3::zeros());
        assert_eq!(fd_div(&f, &x, 1e-4), 0.0);
    }

    #[test]
    fn rotation_field() {
        let f = FnField { dim: 3, f: |x: &Vec3| Vec3::new(x.y, -x.x, 0.0), name: "rot".into() };
        let c = fd_curl(&f, &Vec3::new(0.4, 0.1, -0.3), 1e-4);
        assert!((c - Vec3::new(0.0, 0.0, -2.0)).norm() < 1e-8);
    }
}
