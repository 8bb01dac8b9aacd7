//! Pointwise vector identities.

use crate::fields::fd::{fd_curl, fd_jacobian};
use crate::fields::{FieldSampler, FnField};
use crate::geometry::Vec3;

/// `|(u × x)·(u × ν) - (|u|²(x·ν) - (u·x)(u·ν))|`.
pub fn check_lagrange_pointwise(u: &Vec3, x: &Vec3, nu: &Vec3) -> f64 {
    let lhs = u.cross(x).dot(&u.cross(nu));
    let rhs = u.norm_squared() * x.dot(nu) - u.dot(x) * u.dot(nu);
    (lhs - rhs).abs()
}

/// `‖curl(a × b) - [(div b)a - (div a)b + (b·∇)a - (a·∇)b]‖` with every
/// derivative taken by central differences of step `h`.
pub fn check_curl_cross_pointwise(a: &dyn FieldSampler, b: &dyn FieldSampler, x: &Vec3, h: f64) -> f64 {
    let dim = a.dim().max(b.dim());
    let prod = FnField { dim, f: |p: &Vec3| a.value(p).cross(&b.value(p)), name: "a x b".into() };
    let lhs = fd_curl(&prod, x, h);
    let ja = fd_jacobian(a, x, h);
    let jb = fd_jacobian(b, x, h);
    let (va, vb) = (a.value(x), b.value(x));
    let rhs = va * jb.trace() - vb * ja.trace() + ja * vb - jb * va;
    (lhs - rhs).norm()
}
