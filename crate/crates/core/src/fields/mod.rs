//! Analytic vector fields and scalar weights with their derivatives.
//!
//! Planar fields use the same 3D representation with a zero third component;
//! their curl is reported as `(0, 0, ∂₁u₂ - ∂₂u₁)`.

pub mod fd;
pub mod poly;
pub mod spheromak;
pub mod trig;
pub mod weight;

use nalgebra::Matrix3;

use crate::error::Result;
use crate::geometry::Vec3;

pub use fd::{fd_curl, fd_div, fd_jacobian, DEFAULT_FD_STEP};
pub use poly::{make_polynomial_field, make_polynomial_weight, Poly, PolynomialField, PolynomialWeight};
pub use spheromak::{make_spheromak, Spheromak};
pub use trig::{make_trig_beltrami, TrigBeltrami};
pub use weight::{make_power_weight, PowerWeight};

/// A pointwise-evaluable vector field with optional analytic derivatives.
pub trait FieldSampler: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vec3) -> Vec3;
    fn curl(&self, _x: &Vec3) -> Option<Vec3> {
        None
    }
    fn div(&self, _x: &Vec3) -> Option<f64> {
        None
    }
    fn tag(&self) -> String;
}

/// A smooth scalar weight `φ`. Evaluation may fail where `φ` is singular.
pub trait WeightFunction: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vec3) -> Result<f64>;
    fn grad(&self, x: &Vec3) -> Result<Vec3>;
    fn hessian(&self, x: &Vec3) -> Result<Matrix3<f64>>;
    fn laplacian(&self, x: &Vec3) -> Result<f64>;
    fn tag(&self) -> String;
}

/// `s · u` for a wrapped field.
pub struct Scaled<'a> {
    pub field: &'a dyn FieldSampler,
    pub s: f64,
}

impl FieldSampler for Scaled<'_> {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn value(&self, x: &Vec3) -> Vec3 {
        self.field.value(x) * self.s
    }
    fn curl(&self, x: &Vec3) -> Option<Vec3> {
        self.field.curl(x).map(|c| c * self.s)
    }
    fn div(&self, x: &Vec3) -> Option<f64> {
        self.field.div(x).map(|d| d * self.s)
    }
    fn tag(&self) -> String {
        format!("{}*{}", self.s, self.field.tag())
    }
}

/// The zero field.
pub struct Zero(pub usize);

impl FieldSampler for Zero {
    fn dim(&self) -> usize {
        self.0
    }
    fn value(&self, _x: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
    fn curl(&self, _x: &Vec3) -> Option<Vec3> {
        Some(Vec3::zeros())
    }
    fn div(&self, _x: &Vec3) -> Option<f64> {
        Some(0.0)
    }
    fn tag(&self) -> String {
        "zero".into()
    }
}

/// A field given by a closure, without analytic derivatives.
pub struct FnField<F: Fn(&Vec3) -> Vec3 + Send + Sync> {
    pub dim: usize,
    pub f: F,
    pub name: String,
}

impl<F: Fn(&Vec3) -> Vec3 + Send + Sync> FieldSampler for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &Vec3) -> Vec3 {
        (self.f)(x)
    }
    fn tag(&self) -> String {
        self.name.clone()
    }
}
