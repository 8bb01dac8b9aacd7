//! Numerical checks of the div–curl integral identities.
//!
//! Every identity is split into its individual volume and surface integrals,
//! all evaluated with the same quadrature points, and residuals are reported
//! relative to the largest single term.

pub mod pointwise;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::fd::{fd_curl, fd_div, DEFAULT_FD_STEP};
use crate::fields::weight::PowerWeight;
use crate::fields::{FieldSampler, WeightFunction};
use crate::geometry::integrate::{for_each_cell_point, for_each_facet_point};
use crate::geometry::{SimplicialMesh, Vec3};

pub use pointwise::{check_curl_cross_pointwise, check_lagrange_pointwise};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub terms: Vec<Term>,
    pub lhs_total: f64,
    pub rhs_totals: Vec<f64>,
    pub abs_residual: f64,
    pub rel_residual: f64,
    /// `|E2 - E3|` and its relative value for the weighted identity.
    pub alt_abs_residual: Option<f64>,
    pub alt_rel_residual: Option<f64>,
    pub mesh_id: String,
    pub field_tag: String,
    pub order: usize,
    /// `analytic` or `finite-difference`.
    pub derivative_source: String,
}

impl IdentityReport {
    fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.value.abs()).fold(1e-30, f64::max)
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

/// Extra degree carried by boundary integrands relative to volume ones.
const FACET_ORDER_BUMP: usize = 1;

struct Derivs<'a> {
    field: &'a dyn FieldSampler,
    fd: bool,
}

impl<'a> Derivs<'a> {
    fn new(field: &'a dyn FieldSampler) -> Self {
        let probe = Vec3::new(0.1, 0.2, 0.3);
        let fd = field.curl(&probe).is_none() || field.div(&probe).is_none();
        Self { field, fd }
    }
    fn curl(&self, x: &Vec3) -> Vec3 {
        self.field.curl(x).unwrap_or_else(|| fd_curl(self.field, x, DEFAULT_FD_STEP))
    }
    fn div(&self, x: &Vec3) -> f64 {
        self.field.div(x).unwrap_or_else(|| fd_div(self.field, x, DEFAULT_FD_STEP))
    }
    fn source(&self) -> String {
        if self.fd { "finite-difference" } else { "analytic" }.into()
    }
}

struct Sums {
    v_curl: f64,
    v_div: f64,
    v_lap: f64,
    v_hess: f64,
    s_grad: f64,
    s_cross: f64,
    s_dot: f64,
}

fn weighted_sums(field: &dyn FieldSampler, d: &Derivs, phi: &dyn WeightFunction, mesh: &SimplicialMesh, order: usize) -> Result<Sums> {
    let mut s = Sums { v_curl: 0.0, v_div: 0.0, v_lap: 0.0, v_hess: 0.0, s_grad: 0.0, s_cross: 0.0, s_dot: 0.0 };
    for_each_cell_point(mesh, order, |p| {
        let u = field.value(&p.x);
        let g = phi.grad(&p.x)?;
        let h = phi.hessian(&p.x)?;
        s.v_curl += p.weight * d.curl(&p.x).cross(&u).dot(&g);
        s.v_div += p.weight * d.div(&p.x) * u.dot(&g);
        s.v_lap += p.weight * 0.5 * u.norm_squared() * phi.laplacian(&p.x)?;
        s.v_hess += p.weight * u.dot(&(h * u));
        Ok(())
    })?;
    for_each_facet_point(mesh, order + FACET_ORDER_BUMP, |p| {
        let u = field.value(&p.x);
        let g = phi.grad(&p.x)?;
        s.s_grad += p.weight * 0.5 * u.norm_squared() * g.dot(&p.normal);
        s.s_cross += p.weight * u.cross(&g).dot(&u.cross(&p.normal));
        s.s_dot += p.weight * u.dot(&g) * u.dot(&p.normal);
        Ok(())
    })?;
    Ok(s)
}

/// Checks `∫ curl u × u·∇φ + (div u)(u·∇φ) = ∫ |u|²/2 Δφ - uᵀ(∇²φ)u
/// + ∮ |u|²/2 ∇φ·ν - (u × ∇φ)·(u × ν)`.
pub fn check_green_curl(field: &dyn FieldSampler, phi: &dyn WeightFunction, mesh: &SimplicialMesh, order: usize) -> Result<IdentityReport> {
    let d = Derivs::new(field);
    let s = weighted_sums(field, &d, phi, mesh, order)?;
    let lhs = s.v_curl + s.v_div;
    let rhs = s.v_lap - s.v_hess + s.s_grad - s.s_cross;
    let terms = vec![
        Term { name: "curl_cross_grad_phi".into(), value: s.v_curl },
        Term { name: "div_u_dot_grad_phi".into(), value: s.v_div },
        Term { name: "half_u2_laplacian".into(), value: s.v_lap },
        Term { name: "hessian_form".into(), value: s.v_hess },
        Term { name: "surface_half_u2_flux".into(), value: s.s_grad },
        Term { name: "surface_cross_term".into(), value: s.s_cross },
    ];
    let mut r = IdentityReport {
        identity: "green-curl".into(),
        terms,
        lhs_total: lhs,
        rhs_totals: vec![rhs],
        abs_residual: (lhs - rhs).abs(),
        rel_residual: 0.0,
        alt_abs_residual: None,
        alt_rel_residual: None,
        mesh_id: mesh.mesh_id().to_string(),
        field_tag: field.tag(),
        order,
        derivative_source: d.source(),
    };
    r.rel_residual = r.abs_residual / r.scale();
    Ok(r)
}

/// Exact closed-simplex containment of the origin in cell `c`.
fn cell_contains_origin(mesh: &SimplicialMesh, c: usize) -> bool {
    let p = mesh.cell_points(c);
    let g = mesh.bary_gradients(c);
    let tol = 1e-12;
    (0..=mesh.dim).all(|k| {
        // λ_k(0) = 1 + ∇λ_k·(0 - p_k) evaluated from vertex k.
        let lam = 1.0 - g[k].dot(&p[k]);
        lam >= -tol
    })
}

/// First cell whose closure contains the origin, using bounding boxes and
/// resolving inconclusive boxes by exact containment.
pub fn origin_cell(mesh: &SimplicialMesh) -> Option<usize> {
    (0..mesh.n_cells()).find(|&c| {
        let (lo, hi) = mesh.cell_bbox(c);
        let in_box = (0..mesh.dim).all(|k| lo[k] <= 0.0 && hi[k] >= 0.0);
        in_box && cell_contains_origin(mesh, c)
    })
}

/// The weighted identity with `∇φ = x/|x|^α`: reports `E1` (volume side),
/// `E2` (surface term with `(u·x/|x|^α)(u·ν)`), `E3` (surface term with
/// `(u × x/|x|^α)·(u × ν)`), `|E1 - E2|` and `|E2 - E3|`.
pub fn check_weighted(field: &dyn FieldSampler, alpha: f64, mesh: &SimplicialMesh, order: usize) -> Result<IdentityReport> {
    let phi = PowerWeight::new(alpha, mesh.dim)?;
    if alpha > 0.0 {
        if let Some(cell) = origin_cell(mesh) {
            return Err(Error::OriginInDomain { cell });
        }
    }
    let d = Derivs::new(field);
    let s = weighted_sums(field, &d, &phi, mesh, order)?;
    let vol = s.v_lap - s.v_hess;
    let e1 = s.v_curl + s.v_div;
    let e2 = vol + s.s_dot - s.s_grad;
    let e3 = vol + s.s_grad - s.s_cross;
    let terms = vec![
        Term { name: "curl_cross_weight".into(), value: s.v_curl },
        Term { name: "div_weight".into(), value: s.v_div },
        Term { name: "volume_weighted".into(), value: vol },
        Term { name: "surface_u_dot_x_u_dot_nu".into(), value: s.s_dot },
        Term { name: "surface_half_u2_x_dot_nu".into(), value: s.s_grad },
        Term { name: "surface_cross_term".into(), value: s.s_cross },
    ];
    let mut r = IdentityReport {
        identity: format!("weighted(alpha={alpha})"),
        terms,
        lhs_total: e1,
        rhs_totals: vec![e2, e3],
        abs_residual: (e1 - e2).abs(),
        rel_residual: 0.0,
        alt_abs_residual: Some((e2 - e3).abs()),
        alt_rel_residual: None,
        mesh_id: mesh.mesh_id().to_string(),
        field_tag: field.tag(),
        order,
        derivative_source: d.source(),
    };
    let sc = r.scale();
    r.rel_residual = r.abs_residual / sc;
    r.alt_rel_residual = Some((e2 - e3).abs() / sc);
    Ok(r)
}

/// `(∫ |u|²/2, ∮ |u|²/2 (x·ν), ‖u × ν‖_{L²(∂Ω)})` for a mesh already
/// centered at a star center.
pub fn theorem1_functional(field: &dyn FieldSampler, mesh: &SimplicialMesh) -> Result<(f64, f64, f64)> {
    let mut vol = 0.0;
    for_each_cell_point(mesh, 4, |p| {
        vol += p.weight * 0.5 * field.value(&p.x).norm_squared();
        Ok(())
    })?;
    let (mut bd, mut tr) = (0.0, 0.0);
    for_each_facet_point(mesh, 5, |p| {
        let u = field.value(&p.x);
        bd += p.weight * 0.5 * u.norm_squared() * p.x.dot(&p.normal);
        tr += p.weight * u.cross(&p.normal).norm_squared();
        Ok(())
    })?;
    Ok((vol, bd, tr.sqrt()))
}

/// A field that can be sampled per cell from barycentric coordinates, so
/// piecewise finite element fields and analytic fields share one interface.
/// Facet traces are taken from the owning cell.
pub trait CellField {
    fn at(&self, cell: usize, bary: &[f64], x: &Vec3) -> Vec3;
}

pub struct Analytic<'a>(pub &'a dyn FieldSampler);

impl CellField for Analytic<'_> {
    fn at(&self, _cell: usize, _bary: &[f64], x: &Vec3) -> Vec3 {
        self.0.value(x)
    }
}

/// Curl of an analytic field as a [`CellField`].
pub struct AnalyticCurl<'a>(pub &'a dyn FieldSampler);

impl CellField for AnalyticCurl<'_> {
    fn at(&self, _cell: usize, _bary: &[f64], x: &Vec3) -> Vec3 {
        self.0.curl(x).unwrap_or_else(|| fd_curl(self.0, x, DEFAULT_FD_STEP))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenIdentityReport {
    pub curl_l2_sq: f64,
    pub u_l2_sq: f64,
    pub surface_curl_sq_x_nu: f64,
    pub surface_u_sq_x_nu: f64,
    pub beta: f64,
    /// `∫ |curl u|² + β|u|² + ∮ |curl u|² (x·ν) - β ∮ |u|² (x·ν)`.
    pub residual: f64,
    /// Residual divided by `∫ |curl u|² + β|u|²` (0 for the zero field).
    pub rel_residual: f64,
}

/// Residual of the eigenvalue identity for a mesh centered at a star center.
pub fn eigen_identity_check(u: &dyn CellField, curl_u: &dyn CellField, beta: f64, mesh: &SimplicialMesh, order: usize) -> Result<EigenIdentityReport> {
    let (mut cc, mut uu) = (0.0, 0.0);
    for_each_cell_point(mesh, order, |p| {
        cc += p.weight * curl_u.at(p.cell, &p.bary, &p.x).norm_squared();
        uu += p.weight * u.at(p.cell, &p.bary, &p.x).norm_squared();
        Ok(())
    })?;
    let (mut sc, mut su) = (0.0, 0.0);
    for_each_facet_point(mesh, order + FACET_ORDER_BUMP, |p| {
        let xn = p.x.dot(&p.normal);
        sc += p.weight * curl_u.at(p.cell, &p.bary, &p.x).norm_squared() * xn;
        su += p.weight * u.at(p.cell, &p.bary, &p.x).norm_squared() * xn;
        Ok(())
    })?;
    let residual = cc + beta * uu + sc - beta * su;
    let denom = cc + beta * uu;
    Ok(EigenIdentityReport {
        curl_l2_sq: cc,
        u_l2_sq: uu,
        surface_curl_sq_x_nu: sc,
        surface_u_sq_x_nu: su,
        beta,
        residual,
        rel_residual: if denom > 0.0 { residual / denom } else { 0.0 },
    })
}
