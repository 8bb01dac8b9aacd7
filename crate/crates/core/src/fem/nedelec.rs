//! Lowest-order Nédélec (Whitney) edge elements.
//!
//! Each global edge is oriented from its lower to its higher vertex index.
//! On a cell, the basis function of an edge `(i, j)` with that orientation is
//! `λ_i∇λ_j - λ_j∇λ_i`, whose curl is the constant `2∇λ_i × ∇λ_j`. Planar
//! meshes use the same formulas; the curl then has only a `z` component.

use crate::geometry::edges::{local_edges, EdgeTopology};
use crate::geometry::quadrature::quad_rule;
use crate::geometry::{SimplicialMesh, Vec3};
use crate::identity::CellField;

/// Local edges of cell `c` as `(tail, head)` local vertex pairs following
/// the global orientation.
pub fn oriented_local_edges(mesh: &SimplicialMesh, c: usize) -> Vec<(usize, usize)> {
    let cv = mesh.cell(c);
    local_edges(mesh.dim)
        .iter()
        .map(|&(a, b)| if cv[a] < cv[b] { (a, b) } else { (b, a) })
        .collect()
}

pub fn edge_values(oe: &[(usize, usize)], bary: &[f64], g: &[Vec3]) -> Vec<Vec3> {
    oe.iter().map(|&(i, j)| g[j] * bary[i] - g[i] * bary[j]).collect()
}

pub fn edge_curls(oe: &[(usize, usize)], g: &[Vec3]) -> Vec<Vec3> {
    oe.iter().map(|&(i, j)| g[i].cross(&g[j]) * 2.0).collect()
}

pub struct EdgeLocal {
    pub curl: Vec<f64>,
    pub mass: Vec<f64>,
    /// `∫ w_e·∇λ_v`, rows are local vertices, columns local edges.
    pub grad_coupling: Vec<f64>,
}

pub fn edge_local(mesh: &SimplicialMesh, c: usize) -> EdgeLocal {
    let d = mesh.dim;
    let ne = if d == 2 { 3 } else { 6 };
    let nv = d + 1;
    let oe = oriented_local_edges(mesh, c);
    let g = mesh.bary_gradients(c);
    let vol = mesh.cell_volume(c);
    let cu = edge_curls(&oe, &g);
    let q = quad_rule(d, 2).expect("order-2 rule");
    let jac: f64 = vol * (1..=d).map(|k| k as f64).product::<f64>();
    let mut curl = vec![0.0; ne * ne];
    let mut mass = vec![0.0; ne * ne];
    let mut gc = vec![0.0; nv * ne];
    for i in 0..ne {
        for j in 0..ne {
            curl[i * ne + j] = vol * cu[i].dot(&cu[j]);
        }
    }
    for (b, w) in q.points.iter().zip(&q.weights) {
        let wv = edge_values(&oe, b, &g);
        let w = w * jac;
        for i in 0..ne {
            for j in 0..ne {
                mass[i * ne + j] += w * wv[i].dot(&wv[j]);
            }
            for v in 0..nv {
                gc[v * ne + i] += w * wv[i].dot(&g[v]);
            }
        }
    }
    EdgeLocal { curl, mass, grad_coupling: gc }
}

/// Full edge coefficient vector on a mesh.
pub struct EdgeField<'a> {
    pub mesh: &'a SimplicialMesh,
    pub topo: &'a EdgeTopology,
    pub coeffs: Vec<f64>,
}

impl EdgeField<'_> {
    pub fn curl_on(&self, c: usize) -> Vec3 {
        let g = self.mesh.bary_gradients(c);
        let oe = oriented_local_edges(self.mesh, c);
        let cu = edge_curls(&oe, &g);
        self.topo.of_cell(c).iter().zip(&cu).fold(Vec3::zeros(), |s, (e, w)| s + w * self.coeffs[*e])
    }
}

impl CellField for EdgeField<'_> {
    fn at(&self, cell: usize, bary: &[f64], _x: &Vec3) -> Vec3 {
        let g = self.mesh.bary_gradients(cell);
        let oe = oriented_local_edges(self.mesh, cell);
        let w = edge_values(&oe, bary, &g);
        self.topo.of_cell(cell).iter().zip(&w).fold(Vec3::zeros(), |s, (e, wv)| s + wv * self.coeffs[*e])
    }
}

/// The piecewise-constant curl of an [`EdgeField`].
pub struct EdgeCurl<'a, 'b>(pub &'b EdgeField<'a>);

impl CellField for EdgeCurl<'_, '_> {
    fn at(&self, cell: usize, _bary: &[f64], _x: &Vec3) -> Vec3 {
        self.0.curl_on(cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_mesh, DomainSpec};

    #[test]
    fn tangential_moments_are_unit() {
        // ∫_e w_e·t_e = 1 along its own edge, 0 along the others.
        let m = generate_mesh(&DomainSpec::Cube, 1).unwrap();
        let c = 0;
        let p = m.cell_points(c);
        let g = m.bary_gradients(c);
        let oe = oriented_local_edges(&m, c);
        for (k, &(i, j)) in oe.iter().enumerate() {
            let mut b = vec![0.0; 4];
            b[i] = 0.5;
            b[j] = 0.5;
            let w = edge_values(&oe, &b, &g);
            let t = p[j] - p[i];
            for (l, wl) in w.iter().enumerate() {
                let want = if l == k { 1.0 } else { 0.0 };
                assert!((wl.dot(&t) - want).abs() < 1e-14, "{k} {l}");
            }
        }
    }

    #[test]
    fn gradients_have_zero_curl() {
        // The edge interpolant of ∇λ_v has coefficients ±1 on edges at v.
        let m = generate_mesh(&DomainSpec::Cube, 1).unwrap();
        let c = 0;
        let g = m.bary_gradients(c);
        let oe = oriented_local_edges(&m, c);
        let cu = edge_curls(&oe, &g);
        for v in 0..4 {
            let mut s = Vec3::zeros();
            for (k, &(i, j)) in oe.iter().enumerate() {
                let coef = if j == v { 1.0 } else if i == v { -1.0 } else { 0.0 };
                s += cu[k] * coef;
            }
            assert!(s.norm() < 1e-12);
        }
    }
}
