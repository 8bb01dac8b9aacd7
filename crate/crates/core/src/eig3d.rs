//! Volume eigenvalue problems on tetrahedra (Nédélec Maxwell, Taylor–Hood
//! Stokes) plus boundary-trace and curl-duality diagnostics of eigenfields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::lagrange::p1_local;
use crate::fem::problems::{MaxwellProblem, P2Curl, StokesProblem};
use crate::fem::FemSpace;
use crate::geometry::integrate::{for_each_cell_point, for_each_facet_point};
use crate::geometry::{SimplicialMesh, Vec3};
use crate::identity::CellField;
use crate::linalg::ldl::LdlFactor;
use crate::linalg::sparse::TripletBuilder;
use crate::linalg::{EigenResult, PencilKind};

/// Lowest-order edge space with its tangential-trace mask.
pub type EdgeSpace3d = FemSpace;

pub const TRACE_ORDER: usize = 4;

fn require_3d(mesh: &SimplicialMesh) -> Result<()> {
    if mesh.dim != 3 {
        return Err(Error::InvalidInput(format!("volume solver needs a 3D mesh, got dim {}", mesh.dim)));
    }
    Ok(())
}

pub fn maxwell_eigs_3d(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_3d(mesh)?;
    MaxwellProblem::new(mesh)?.solve(k)
}

pub fn stokes_eigs_3d(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_3d(mesh)?;
    StokesProblem::new(mesh)?.solve(k)
}

/// Boundary `L²` norms of the four traces, each divided by `‖u‖_{L²(Ω)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub norm_u_dot_nu: f64,
    pub norm_curlu_cross_nu: f64,
    pub norm_u_cross_nu: f64,
    pub norm_curlu_dot_nu: f64,
}

pub fn boundary_trace_report(
    u: &dyn CellField,
    curl_u: &dyn CellField,
    mesh: &SimplicialMesh,
    order: usize,
) -> Result<TraceReport> {
    let mut uu = 0.0;
    for_each_cell_point(mesh, order, |p| {
        uu += p.weight * u.at(p.cell, &p.bary, &p.x).norm_squared();
        Ok(())
    })?;
    if !(uu > 0.0) {
        return Err(Error::InvalidInput("trace report of the zero field".into()));
    }
    let mut t = [0.0; 4];
    for_each_facet_point(mesh, order, |p| {
        let v = u.at(p.cell, &p.bary, &p.x);
        let c = curl_u.at(p.cell, &p.bary, &p.x);
        let n = &p.normal;
        t[0] += p.weight * v.dot(n).powi(2);
        t[1] += p.weight * c.cross(n).norm_squared();
        t[2] += p.weight * v.cross(n).norm_squared();
        t[3] += p.weight * c.dot(n).powi(2);
        Ok(())
    })?;
    let s = uu.sqrt();
    Ok(TraceReport {
        norm_u_dot_nu: t[0].sqrt() / s,
        norm_curlu_cross_nu: t[1].sqrt() / s,
        norm_u_cross_nu: t[2].sqrt() / s,
        norm_curlu_dot_nu: t[3].sqrt() / s,
    })
}

fn pair<'e>(eig: &'e EigenResult, mesh: &SimplicialMesh, index: usize, kind: PencilKind) -> Result<&'e [f64]> {
    if eig.pencil_kind.is_some_and(|k| k != kind) {
        return Err(Error::InvalidInput(format!("expected a {kind} eigenpair")));
    }
    if !eig.mesh_id.is_empty() && eig.mesh_id != mesh.mesh_id() {
        return Err(Error::InvalidInput(format!("eigenpair computed on {}, not {}", eig.mesh_id, mesh.mesh_id())));
    }
    eig.eigenvectors
        .get(index)
        .map(Vec::as_slice)
        .ok_or_else(|| Error::InvalidInput(format!("no eigenpair {index}")))
}

/// Traces of a Maxwell eigenfield (edge elements, piecewise-constant curl).
pub fn maxwell_trace_report(eig: &EigenResult, index: usize, mesh: &SimplicialMesh) -> Result<TraceReport> {
    let x = pair(eig, mesh, index, PencilKind::Maxwell)?;
    let p = MaxwellProblem::new(mesh)?;
    let f = p.field(x);
    boundary_trace_report(&f, &crate::fem::nedelec::EdgeCurl(&f), mesh, TRACE_ORDER)
}

/// Traces of a Stokes velocity eigenfield (P2, piecewise-linear curl).
pub fn stokes_trace_report(eig: &EigenResult, index: usize, mesh: &SimplicialMesh) -> Result<TraceReport> {
    let x = pair(eig, mesh, index, PencilKind::Stokes)?;
    let p = StokesProblem::new(mesh)?;
    let f = p.field(x);
    boundary_trace_report(&f, &P2Curl(&f), mesh, TRACE_ORDER)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaDualityReport {
    pub alpha: f64,
    /// `‖curl v‖² / ‖v‖²` for `v` the continuous projection of `curl u`.
    pub rayleigh: f64,
    pub rel_error: f64,
    /// `‖v·ν‖_{∂Ω} / ‖v‖_Ω` for the cellwise curl itself.
    pub v_dot_nu_rel: f64,
}

/// Witness that the curl of a tangent-trace eigenfield is a normal-trace
/// eigenfield with the same eigenvalue.
///
/// `v = curl u` is piecewise constant, so it is first `L²`-projected onto
/// continuous P1 vectors before its own curl is formed.
pub fn beta_duality_check(eig: &EigenResult, index: usize, mesh: &SimplicialMesh) -> Result<BetaDualityReport> {
    let x = pair(eig, mesh, index, PencilKind::Maxwell)?;
    let alpha = eig.eigenvalues[index];
    let p = MaxwellProblem::new(mesh)?;
    let f = p.field(x);
    let curls: Vec<Vec3> = (0..mesh.n_cells()).map(|c| f.curl_on(c)).collect();
    let vv: f64 = curls.iter().enumerate().map(|(c, v)| mesh.cell_volume(c) * v.norm_squared()).sum();
    if !(vv > 1e-300) {
        return Err(Error::InvalidInput("curl of the eigenfield vanishes".into()));
    }

    let nv = mesh.n_vertices();
    let d = mesh.dim;
    let mut tb = TripletBuilder::new(nv, nv);
    let mut rhs = vec![vec![0.0; nv]; 3];
    for c in 0..mesh.n_cells() {
        let cv = mesh.cell(c);
        let (_, m) = p1_local(mesh, c);
        for i in 0..=d {
            for j in 0..=d {
                tb.push(cv[i], cv[j], m[i * (d + 1) + j]);
            }
            let share = mesh.cell_volume(c) / (d + 1) as f64;
            for (k, r) in rhs.iter_mut().enumerate() {
                r[cv[i]] += share * curls[c][k];
            }
        }
    }
    let mass = tb.build()?;
    let fac = LdlFactor::new(&mass)?;
    let comps: Vec<Vec<f64>> = rhs.iter().map(|r| fac.solve_refined(&mass, r)).collect();
    let node = |i: usize| Vec3::new(comps[0][i], comps[1][i], comps[2][i]);

    let mut num = 0.0;
    let mut den = 0.0;
    for c in 0..mesh.n_cells() {
        let cv = mesh.cell(c);
        let g = mesh.bary_gradients(c);
        let curl = (0..=d).fold(Vec3::zeros(), |s, i| s + g[i].cross(&node(cv[i])));
        num += mesh.cell_volume(c) * curl.norm_squared();
        let vals: Vec<Vec3> = (0..=d).map(|i| node(cv[i])).collect();
        // Exact P1 mass: vol/((d+1)(d+2)) (Σ|v_i|² + |Σ v_i|²).
        let sum = vals.iter().fold(Vec3::zeros(), |s, v| s + v);
        let sq: f64 = vals.iter().map(|v| v.norm_squared()).sum();
        den += mesh.cell_volume(c) / ((d + 1) * (d + 2)) as f64 * (sq + sum.norm_squared());
    }
    let rayleigh = num / den;

    let mut vn = 0.0;
    for_each_facet_point(mesh, 1, |q| {
        vn += q.weight * curls[q.cell].dot(&q.normal).powi(2);
        Ok(())
    })?;
    Ok(BetaDualityReport { alpha, rayleigh, rel_error: (rayleigh - alpha).abs() / alpha, v_dot_nu_rel: vn.sqrt() / vv.sqrt() })
}
