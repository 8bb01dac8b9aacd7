use crate::error::{Error, Result};
use crate::fields::FieldSampler;
use crate::geometry::Vec3;

/// Circularly polarized Trkalian field `(sin λz, cos λz, 0)` with `curl u = λu`.
#[derive(Debug, Clone, Copy)]
pub struct TrigBeltrami {
    pub lambda: f64,
}

pub fn make_trig_beltrami(lambda: f64) -> Result<TrigBeltrami> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("trig Beltrami needs lambda != 0, got {lambda}")));
    }
    Ok(TrigBeltrami { lambda })
}

impl FieldSampler for TrigBeltrami {
    fn dim(&self) -> usize {
        3
    }
    fn value(&self, x: &Vec3) -> Vec3 {
        let (s, c) = (self.lambda * x.z).sin_cos();
        Vec3::new(s, c, 0.0)
    }
    fn curl(&self, x: &Vec3) -> Option<Vec3> {
        Some(self.value(x) * self.lambda)
    }
    fn div(&self, _x: &Vec3) -> Option<f64> {
        Some(0.0)
    }
    fn tag(&self) -> String {
        format!("trig:{}", self.lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::fd::{fd_curl, fd_div};

    #[test]
    fn value_at_origin() {
        let u = make_trig_beltrami(1.0).unwrap();
        assert_eq!(u.value(&Vec3::zeros()), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(u.curl(&Vec3::zeros()).unwrap(), Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn fd_oracle_agrees() {
        let u = make_trig_beltrami(2.0).unwrap();
        let x = Vec3::new(0.3, 0.7, -0.4);
        let c = fd_curl(&u, &x, 1e-4);
        assert!((c - u.value(&x) * 2.0).norm() < 1e-7);
        assert!(fd_div(&u, &x, 1e-4).abs() < 1e-12);
        assert!(u.curl(&x).unwrap().cross(&u.value(&x)).norm() < 1e-13);
    }

    #[test]
    fn zero_lambda_rejected() {
        assert!(make_trig_beltrami(0.0).is_err());
    }
}
