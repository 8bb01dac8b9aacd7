//! Star-center detection through the facet half-space LP.

use crate::error::Error;
use crate::geometry::mesh::SimplicialMesh;
use crate::geometry::Vec3;
use crate::linalg::lp::{lp_max_margin, LpProblem};

pub const DEFAULT_STAR_TOL: f64 = 1e-9;

/// One constraint `ν_f·(c_f - x) >= t` per boundary facet.
pub fn star_problem(mesh: &SimplicialMesh) -> LpProblem {
    let d = mesh.dim;
    let mut normals = Vec::with_capacity(mesh.n_boundary_facets());
    let mut offsets = Vec::with_capacity(mesh.n_boundary_facets());
    for f in 0..mesh.n_boundary_facets() {
        let n = mesh.facet_normals[f];
        let c = mesh.facet_centroid(f);
        normals.push(n.as_slice()[..d].to_vec());
        offsets.push(n.dot(&c));
    }
    LpProblem { normals, offsets, dim: d }
}

/// A center maximizing the worst facet margin, or `None` when no point sees
/// every facet from its inner side (not star-shaped at facet resolution).
pub fn star_kernel(mesh: &SimplicialMesh, tol: f64) -> Option<(Vec3, f64)> {
    let p = star_problem(mesh);
    match lp_max_margin(&p, tol) {
        Ok(Some((x, t))) => {
            let mut c = Vec3::zeros();
            for (k, v) in x.iter().enumerate() {
                c[k] = *v;
            }
            Some((c, t))
        }
        Ok(None) | Err(Error::UnboundedLp) => None,
        Err(_) => None,
    }
}

/// `min_f c_f·ν_f` after translating `center` to the origin.
pub fn min_support(mesh: &SimplicialMesh, center: &Vec3) -> f64 {
    (0..mesh.n_boundary_facets())
        .map(|f| (mesh.facet_centroid(f) - center).dot(&mesh.facet_normals[f]))
        .fold(f64::INFINITY, f64::min)
}
