//! Quadrature residuals of an analytic Beltrami candidate on a ball mesh.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{fd_curl, fd_div, make_spheromak, FieldSampler, DEFAULT_FD_STEP};
use crate::geometry::integrate::{for_each_cell_point, for_each_facet_point, for_each_sphere_point};
use crate::geometry::SimplicialMesh;
use crate::linalg::roots::spheromak_eigenvalue;

pub const VERIFY_ORDER: usize = 4;

/// Absolute norms (`*_abs`) and their relative versions. Relative values
/// divide by `‖u‖` (times `max|u|` for the quadratic cross term, which is 1
/// for the normalized spheromak).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheromakReport {
    pub lambda: f64,
    /// First root of `tan x = x`, the eigenvalue the field is judged against.
    pub lambda_root: f64,
    pub u_l2: f64,
    pub u_max: f64,
    pub cross_abs: f64,
    pub div_abs: f64,
    /// `‖u·ν‖` on the exact unit sphere.
    pub trace_abs: f64,
    /// `‖curl u - λ₀ u‖`.
    pub eigen_abs: f64,
    pub cross_rel: f64,
    pub div_rel: f64,
    pub trace_rel: f64,
    pub eigen_rel: f64,
    /// `‖u·ν‖ / ‖u‖` on the polyhedral boundary, which carries the
    /// geometric error of the facet normals.
    pub facet_trace_rel: f64,
}

/// Residuals with finite-difference curl and divergence.
pub fn field_residuals(field: &dyn FieldSampler, mesh: &SimplicialMesh, lambda_root: f64, lambda: f64) -> Result<SpheromakReport> {
    if mesh.dim != 3 {
        return Err(Error::InvalidInput("residuals need a 3D ball mesh".into()));
    }
    let h = DEFAULT_FD_STEP;
    let (mut uu, mut cross, mut div, mut eig) = (0.0, 0.0, 0.0, 0.0);
    let mut umax: f64 = 0.0;
    for_each_cell_point(mesh, VERIFY_ORDER, |p| {
        let u = field.value(&p.x);
        let c = fd_curl(field, &p.x, h);
        uu += p.weight * u.norm_squared();
        cross += p.weight * c.cross(&u).norm_squared();
        div += p.weight * fd_div(field, &p.x, h).powi(2);
        eig += p.weight * (c - lambda_root * u).norm_squared();
        umax = umax.max(u.norm());
        Ok(())
    })?;
    let mut trace = 0.0;
    for_each_sphere_point(mesh, 1.0, VERIFY_ORDER, |p| {
        trace += p.weight * field.value(&p.x).dot(&p.normal).powi(2);
        Ok(())
    })?;
    let mut facet = 0.0;
    for_each_facet_point(mesh, VERIFY_ORDER, |p| {
        facet += p.weight * field.value(&p.x).dot(&p.normal).powi(2);
        Ok(())
    })?;
    let ul2 = uu.sqrt();
    if !(ul2 > 0.0) {
        return Err(Error::InvalidInput("zero field".into()));
    }
    Ok(SpheromakReport {
        lambda,
        lambda_root,
        u_l2: ul2,
        u_max: umax,
        cross_abs: cross.sqrt(),
        div_abs: div.sqrt(),
        trace_abs: trace.sqrt(),
        eigen_abs: eig.sqrt(),
        cross_rel: cross.sqrt() / (ul2 * umax),
        div_rel: div.sqrt() / ul2,
        trace_rel: trace.sqrt() / ul2,
        eigen_rel: eig.sqrt() / (lambda_root * ul2),
        facet_trace_rel: facet.sqrt() / ul2,
    })
}

/// Residuals of the spheromak built with `lambda`, judged against the
/// true eigenvalue `λ₀`.
pub fn spheromak_verify(mesh_ball: &SimplicialMesh, lambda: f64) -> Result<SpheromakReport> {
    let u = make_spheromak(lambda)?;
    field_residuals(&u, mesh_ball, spheromak_eigenvalue(), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Scaled;
    use crate::geometry::{generate_mesh, DomainSpec};

    #[test]
    fn homogeneity_under_scaling() {
        let m = generate_mesh(&DomainSpec::Ball, 3).unwrap();
        let lam = spheromak_eigenvalue() * 1.05;
        let u = make_spheromak(lam).unwrap();
        let a = field_residuals(&u, &m, spheromak_eigenvalue(), lam).unwrap();
        let b = field_residuals(&Scaled { field: &u, s: 2.0 }, &m, spheromak_eigenvalue(), lam).unwrap();
        assert!((b.trace_abs / a.trace_abs - 2.0).abs() < 1e-9);
        assert!((b.eigen_abs / a.eigen_abs - 2.0).abs() < 1e-9);
        assert!((b.u_l2 / a.u_l2 - 2.0).abs() < 1e-12);
        // The cross and divergence residuals sit at finite-difference noise
        // here, so only the dominant terms are checked for homogeneity.
        assert!(b.cross_abs <= 4.0 * a.cross_abs + 1e-9);
    }
}
