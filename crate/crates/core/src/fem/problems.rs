//! Assembled eigenvalue pencils: Laplacian (P1), Stokes (Taylor–Hood) and
//! Maxwell (Nédélec with a Kikuchi multiplier), for triangles and tetrahedra.

use crate::error::Result;
use crate::fem::lagrange::{p1_local, p2_boundary, p2_cell_dofs, p2_gradients, p2_local, p2_values};
use crate::fem::nedelec::{edge_local, EdgeField};
use crate::fem::{scatter, DofMap, ElementKind, FemSpace};
use crate::geometry::edges::EdgeTopology;
use crate::geometry::quadrature::quad_rule;
use crate::geometry::{SimplicialMesh, Vec3};
use crate::identity::CellField;
use crate::linalg::eigen::{gen_eig_smallest, EigenResult, PencilKind};
use crate::linalg::sparse::{norm2, SparseMat, TripletBuilder};

pub const EIG_TOL: f64 = 1e-9;

/// Shift used for pencils whose stiffness has a kernel (Neumann, Maxwell):
/// the shifted `(1,1)` block `A + M` stays positive definite.
pub const KERNEL_SHIFT: f64 = -1.0;

pub struct LaplaceProblem {
    pub space: FemSpace,
    pub a: SparseMat,
    pub m: SparseMat,
    pub dirichlet: bool,
}

impl LaplaceProblem {
    pub fn new(mesh: &SimplicialMesh, dirichlet: bool) -> Result<Self> {
        let essential = if dirichlet { mesh.boundary_vertices() } else { vec![false; mesh.n_vertices()] };
        let space = FemSpace::new(ElementKind::P1, mesh.dim, mesh.mesh_id(), essential);
        let n = space.map.n_reduced;
        let nn = (mesh.dim + 1).pow(2) * mesh.n_cells();
        let mut ka = TripletBuilder::with_capacity(n, n, nn);
        let mut km = TripletBuilder::with_capacity(n, n, nn);
        for c in 0..mesh.n_cells() {
            let (k, m) = p1_local(mesh, c);
            let dofs = mesh.cell(c);
            scatter(&mut ka, dofs, &space.map, 0, dofs, &space.map, 0, &k);
            scatter(&mut km, dofs, &space.map, 0, dofs, &space.map, 0, &m);
        }
        Ok(Self { space, a: ka.build()?, m: km.build()?, dirichlet })
    }

    pub fn solve(&self, k: usize) -> Result<EigenResult> {
        let shift = if self.dirichlet { 0.0 } else { KERNEL_SHIFT };
        let mut r = gen_eig_smallest(&self.a, &self.m, k, shift, EIG_TOL)?;
        r.pencil_kind = Some(if self.dirichlet { PencilKind::LaplaceDirichlet } else { PencilKind::LaplaceNeumann });
        r.mesh_id = self.space.mesh_id.clone();
        Ok(r)
    }
}

/// Taylor–Hood Stokes pencil `[[A, Bᵀ], [B, 0]] x = γ [[M, 0], [0, 0]] x`
/// with homogeneous velocity Dirichlet data and pressure dof 0 pinned.
pub struct StokesProblem<'m> {
    pub mesh: &'m SimplicialMesh,
    pub topo: EdgeTopology,
    pub space: FemSpace,
    pub velocity: DofMap,
    pub pressure: DofMap,
    pub a: SparseMat,
    pub m: SparseMat,
    /// Divergence rows for every pressure dof (including the pinned one)
    /// against reduced velocity unknowns.
    pub b_full: SparseMat,
    n_p2: usize,
}

impl<'m> StokesProblem<'m> {
    pub fn new(mesh: &'m SimplicialMesh) -> Result<Self> {
        let d = mesh.dim;
        let topo = EdgeTopology::new(mesh);
        let n_p2 = mesh.n_vertices() + topo.n_edges();
        let bnd = p2_boundary(mesh, &topo);
        let mut vel_ess = Vec::with_capacity(d * n_p2);
        for _ in 0..d {
            vel_ess.extend(bnd.iter().copied());
        }
        let velocity = DofMap::new(&vel_ess);
        let mut pres_ess = vec![false; mesh.n_vertices()];
        pres_ess[0] = true;
        let pressure = DofMap::new(&pres_ess);
        let all_p = DofMap::new(&vec![false; mesh.n_vertices()]);
        let nu = velocity.n_reduced;
        let n = nu + pressure.n_reduced;
        let mut ka = TripletBuilder::new(n, n);
        let mut km = TripletBuilder::new(n, n);
        let mut kb = TripletBuilder::new(mesh.n_vertices(), nu);
        let q = quad_rule(d, 2)?;
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        let nloc = if d == 2 { 6 } else { 10 };
        for c in 0..mesh.n_cells() {
            let (kl, ml) = p2_local(mesh, c);
            let dofs = p2_cell_dofs(mesh, &topo, c);
            let g = mesh.bary_gradients(c);
            let vol = mesh.cell_volume(c) * fact;
            let pd = mesh.cell(c);
            for comp in 0..d {
                let vd: Vec<usize> = dofs.iter().map(|&i| comp * n_p2 + i).collect();
                scatter(&mut ka, &vd, &velocity, 0, &vd, &velocity, 0, &kl);
                scatter(&mut km, &vd, &velocity, 0, &vd, &velocity, 0, &ml);
                // -∫ q ∂_comp φ
                let mut bl = vec![0.0; (d + 1) * nloc];
                for (b, w) in q.points.iter().zip(&q.weights) {
                    let gp = p2_gradients(d, b, &g);
                    for i in 0..=d {
                        for (j, gj) in gp.iter().enumerate() {
                            bl[i * nloc + j] -= w * vol * b[i] * gj[comp];
                        }
                    }
                }
                let bt: Vec<f64> = (0..nloc * (d + 1)).map(|k| bl[(k % (d + 1)) * nloc + k / (d + 1)]).collect();
                scatter(&mut ka, pd, &pressure, nu, &vd, &velocity, 0, &bl);
                scatter(&mut ka, &vd, &velocity, 0, pd, &pressure, nu, &bt);
                scatter(&mut kb, pd, &all_p, 0, &vd, &velocity, 0, &bl);
            }
        }
        let mut essential = vel_ess;
        essential.extend(pres_ess);
        let space = FemSpace::new(ElementKind::TaylorHood, d, mesh.mesh_id(), essential);
        Ok(Self { mesh, topo, space, velocity, pressure, a: ka.build()?, m: km.build()?, b_full: kb.build()?, n_p2 })
    }

    pub fn solve(&self, k: usize) -> Result<EigenResult> {
        let mut r = gen_eig_smallest(&self.a, &self.m, k, 0.0, EIG_TOL)?;
        r.pencil_kind = Some(PencilKind::Stokes);
        r.mesh_id = self.space.mesh_id.clone();
        r.constraint_residuals = r.eigenvectors.iter().map(|x| self.div_residual(x)).collect();
        Ok(r)
    }

    pub fn velocity_part<'v>(&self, x: &'v [f64]) -> &'v [f64] {
        &x[..self.velocity.n_reduced]
    }

    /// `‖B u‖ / ‖u‖` for the velocity block of a pencil vector.
    pub fn div_residual(&self, x: &[f64]) -> f64 {
        let u = self.velocity_part(x);
        norm2(&self.b_full.mul_vec(u)) / norm2(u)
    }

    pub fn field(&self, x: &[f64]) -> P2VectorField<'_> {
        let full = self.velocity.expand(self.velocity_part(x));
        P2VectorField { mesh: self.mesh, topo: &self.topo, n_p2: self.n_p2, coeffs: full }
    }
}

/// Continuous piecewise-quadratic vector field.
pub struct P2VectorField<'a> {
    pub mesh: &'a SimplicialMesh,
    pub topo: &'a EdgeTopology,
    pub n_p2: usize,
    pub coeffs: Vec<f64>,
}

impl P2VectorField<'_> {
    fn local(&self, cell: usize, comp: usize) -> Vec<f64> {
        p2_cell_dofs(self.mesh, self.topo, cell).iter().map(|&i| self.coeffs[comp * self.n_p2 + i]).collect()
    }

    pub fn curl_at(&self, cell: usize, bary: &[f64]) -> Vec3 {
        let d = self.mesh.dim;
        let g = self.mesh.bary_gradients(cell);
        let gp = p2_gradients(d, bary, &g);
        let mut j = nalgebra::Matrix3::zeros();
        for comp in 0..d {
            let loc = self.local(cell, comp);
            let grad = gp.iter().zip(&loc).fold(Vec3::zeros(), |s, (gi, ci)| s + gi * *ci);
            j.set_row(comp, &grad.transpose());
        }
        crate::fields::fd::curl_of_jacobian(&j, d)
    }
}

impl CellField for P2VectorField<'_> {
    fn at(&self, cell: usize, bary: &[f64], _x: &Vec3) -> Vec3 {
        let phi = p2_values(self.mesh.dim, bary);
        let mut v = Vec3::zeros();
        for comp in 0..self.mesh.dim {
            v[comp] = self.local(cell, comp).iter().zip(&phi).map(|(c, p)| c * p).sum();
        }
        v
    }
}

pub struct P2Curl<'a, 'b>(pub &'b P2VectorField<'a>);

impl CellField for P2Curl<'_, '_> {
    fn at(&self, cell: usize, bary: &[f64], _x: &Vec3) -> Vec3 {
        self.0.curl_at(cell, bary)
    }
}

/// Kikuchi pencil `[[K, Cᵀ], [C, 0]] x = α [[M, 0], [0, 0]] x` on edge
/// elements with zero tangential trace and a P1 multiplier with zero trace.
pub struct MaxwellProblem<'m> {
    pub mesh: &'m SimplicialMesh,
    pub topo: EdgeTopology,
    pub space: FemSpace,
    pub edges: DofMap,
    pub multiplier: DofMap,
    pub a: SparseMat,
    pub m: SparseMat,
}

impl<'m> MaxwellProblem<'m> {
    pub fn new(mesh: &'m SimplicialMesh) -> Result<Self> {
        let topo = EdgeTopology::new(mesh);
        let edges = DofMap::new(&topo.boundary);
        let bv = mesh.boundary_vertices();
        let multiplier = DofMap::new(&bv);
        let ne = edges.n_reduced;
        let n = ne + multiplier.n_reduced;
        let mut ka = TripletBuilder::new(n, n);
        let mut km = TripletBuilder::new(n, n);
        let nle = if mesh.dim == 2 { 3 } else { 6 };
        let nlv = mesh.dim + 1;
        for c in 0..mesh.n_cells() {
            let loc = edge_local(mesh, c);
            let ed = topo.of_cell(c);
            let vd = mesh.cell(c);
            scatter(&mut ka, ed, &edges, 0, ed, &edges, 0, &loc.curl);
            scatter(&mut km, ed, &edges, 0, ed, &edges, 0, &loc.mass);
            let ct: Vec<f64> = (0..nle * nlv).map(|k| loc.grad_coupling[(k % nlv) * nle + k / nlv]).collect();
            scatter(&mut ka, vd, &multiplier, ne, ed, &edges, 0, &loc.grad_coupling);
            scatter(&mut ka, ed, &edges, 0, vd, &multiplier, ne, &ct);
        }
        let mut essential = topo.boundary.clone();
        essential.extend(bv);
        let space = FemSpace::new(ElementKind::Edge, mesh.dim, mesh.mesh_id(), essential);
        Ok(Self { mesh, topo, space, edges, multiplier, a: ka.build()?, m: km.build()? })
    }

    pub fn solve(&self, k: usize) -> Result<EigenResult> {
        let mut r = gen_eig_smallest(&self.a, &self.m, k, KERNEL_SHIFT, EIG_TOL)?;
        r.pencil_kind = Some(PencilKind::Maxwell);
        r.mesh_id = self.space.mesh_id.clone();
        r.constraint_residuals = r.eigenvectors.iter().map(|x| self.multiplier_norm(x)).collect();
        Ok(r)
    }

    pub fn field(&self, x: &[f64]) -> EdgeField<'_> {
        EdgeField { mesh: self.mesh, topo: &self.topo, coeffs: self.edges.expand(&x[..self.edges.n_reduced]) }
    }

    /// `‖p‖ / ‖x‖` for the multiplier block of a pencil vector.
    pub fn multiplier_norm(&self, x: &[f64]) -> f64 {
        norm2(&x[self.edges.n_reduced..]) / norm2(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_mesh, DomainSpec};
    use std::f64::consts::PI;

    #[test]
    fn square_dirichlet_and_neumann() {
        let m = generate_mesh(&DomainSpec::Square, 16).unwrap();
        let d = LaplaceProblem::new(&m, true).unwrap().solve(1).unwrap();
        assert!((d.eigenvalues[0] / (2.0 * PI * PI) - 1.0).abs() < 0.03);
        let n = LaplaceProblem::new(&m, false).unwrap().solve(2).unwrap();
        assert!(n.eigenvalues[0].abs() < 1e-8);
        assert!((n.eigenvalues[1] / (PI * PI) - 1.0).abs() < 0.03);
    }

    #[test]
    fn square_maxwell_matches_neumann() {
        let m = generate_mesh(&DomainSpec::Square, 16).unwrap();
        let p = MaxwellProblem::new(&m).unwrap();
        let r = p.solve(2).unwrap();
        assert!((r.eigenvalues[0] / (PI * PI) - 1.0).abs() < 0.03, "{:?}", r.eigenvalues);
        assert!(p.multiplier_norm(&r.eigenvectors[0]) < 1e-8);
    }

    #[test]
    fn square_stokes_is_divergence_free() {
        let m = generate_mesh(&DomainSpec::Square, 8).unwrap();
        let p = StokesProblem::new(&m).unwrap();
        let r = p.solve(1).unwrap();
        // First Stokes eigenvalue of the unit square is about 52.34.
        assert!((r.eigenvalues[0] - 52.3447).abs() < 1.0, "{:?}", r.eigenvalues);
        assert!(p.div_residual(&r.eigenvectors[0]) < 1e-8);
    }
}
