//! Planar eigenvalue problems: Dirichlet and Neumann Laplacian, Stokes and
//! the edge-element curl–curl (Maxwell) problem with tangential trace zero.

use crate::error::{Error, Result};
use crate::fem::problems::{LaplaceProblem, MaxwellProblem, StokesProblem};
use crate::fem::FemSpace;
use crate::geometry::SimplicialMesh;
use crate::linalg::EigenResult;

/// Discrete planar space (P1 scalar, Taylor–Hood or edge elements).
pub type Fem2dSpace = FemSpace;

fn require_2d(mesh: &SimplicialMesh) -> Result<()> {
    if mesh.dim != 2 {
        return Err(Error::InvalidInput(format!("planar solver needs a 2D mesh, got dim {}", mesh.dim)));
    }
    Ok(())
}

/// `k` smallest eigenvalues of `-Δ` with homogeneous Dirichlet data (P1).
pub fn laplace_dirichlet_eigs(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_2d(mesh)?;
    LaplaceProblem::new(mesh, true)?.solve(k)
}

/// `k` smallest Neumann eigenvalues of `-Δ` (P1). The first one is the
/// constant mode and is reported, so `μ₂` is entry 1.
pub fn laplace_neumann_eigs(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_2d(mesh)?;
    LaplaceProblem::new(mesh, false)?.solve(k)
}

/// Taylor–Hood Stokes eigenvalues with no-slip data. The velocity
/// divergence residual of each pair is in `constraint_residuals`.
pub fn stokes_eigs_2d(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_2d(mesh)?;
    StokesProblem::new(mesh)?.solve(k)
}

/// Smallest positive curl–curl eigenvalues on edge elements with `u_T = 0`,
/// gradients removed by the mixed multiplier.
pub fn maxwell_eigs_2d(mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    require_2d(mesh)?;
    MaxwellProblem::new(mesh)?.solve(k)
}
