//! Least-squares form `Q_λ(u) = ‖curl u - λu‖² + ‖div u‖²` on P1 vector
//! fields and its smallest eigenvalue against the `L²` mass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SimplicialMesh, Vec3};
use crate::linalg::eigen::gen_eig_smallest;
use crate::linalg::sparse::SparseMat;
use crate::probe::space::{P1VectorSpace, ProbeBc};

pub const FORM_SHIFT: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VainshteinRow {
    pub lambda: f64,
    pub min_eigenvalue: f64,
    pub residual: f64,
}

pub struct VainshteinForm<'m> {
    pub space: P1VectorSpace<'m>,
    pub lambda: f64,
    pub q: SparseMat,
}

fn local_form(mesh: &SimplicialMesh, c: usize, lambda: f64) -> Vec<f64> {
    let g = mesh.bary_gradients(c);
    let vol = mesh.cell_volume(c);
    let e = [Vec3::x(), Vec3::y(), Vec3::z()];
    // Columns indexed by (vertex, component).
    let curl_col = |k: usize| g[k / 3].cross(&e[k % 3]);
    let div_col = |k: usize| g[k / 3][k % 3];
    let mut q = vec![0.0; 144];
    for a in 0..12 {
        for b in 0..12 {
            let ca = curl_col(a);
            let cb = curl_col(b);
            let mut v = vol * (ca.dot(&cb) + div_col(a) * div_col(b));
            // -2λ ∫ curl u · u with ∫ u = vol/4 Σ U_i.
            v -= lambda * vol / 4.0 * (ca[b % 3] + cb[a % 3]);
            if a % 3 == b % 3 {
                let same = if a / 3 == b / 3 { 2.0 } else { 1.0 };
                v += lambda * lambda * vol * same / 20.0;
            }
            q[a * 12 + b] = v;
        }
    }
    q
}

impl<'m> VainshteinForm<'m> {
    pub fn new(mesh: &'m SimplicialMesh, bc: ProbeBc, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidInput(format!("lambda must be a nonzero finite number, got {lambda}")));
        }
        let space = P1VectorSpace::new(mesh, bc)?;
        let mut b = space.builder();
        for c in 0..mesh.n_cells() {
            space.scatter_vector(&mut b, c, &local_form(mesh, c, lambda));
        }
        let q = b.build()?;
        Ok(Self { space, lambda, q })
    }

    /// `Q_λ(u) / ‖u‖²` for nodal vectors projected onto the space.
    pub fn rayleigh(&self, u: &[Vec3]) -> f64 {
        let r = self.space.project(u);
        self.q.bilinear(&r, &r) / self.space.mass.bilinear(&r, &r)
    }

    pub fn smallest(&self) -> Result<VainshteinRow> {
        let res = gen_eig_smallest(&self.q, &self.space.mass, 1, FORM_SHIFT, 1e-10)?;
        Ok(VainshteinRow {
            lambda: self.lambda,
            min_eigenvalue: res.eigenvalues[0],
            residual: res.solver_stats.residual_norms[0],
        })
    }
}

/// Smallest eigenvalue of `Q_λ` on the tangent-zero space for each `λ`.
pub fn vainshtein_check(lambda_grid: &[f64], mesh: &SimplicialMesh) -> Result<Vec<VainshteinRow>> {
    vainshtein_check_with(lambda_grid, mesh, ProbeBc::TangentZero)
}

pub fn vainshtein_check_with(lambda_grid: &[f64], mesh: &SimplicialMesh, bc: ProbeBc) -> Result<Vec<VainshteinRow>> {
    if let Some(l) = lambda_grid.iter().find(|l| **l == 0.0) {
        return Err(Error::InvalidInput(format!("lambda = {l} rejected: the grid must avoid 0")));
    }
    lambda_grid.iter().map(|&l| VainshteinForm::new(mesh, bc, l)?.smallest()).collect()
}
