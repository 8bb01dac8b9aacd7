//! Closed-form reference eigenvalues for the built-in domains.

use std::f64::consts::PI;

use clap::ValueEnum;

use crate::geometry::{DomainSpec, SimplicialMesh};
use crate::linalg::roots::{bessel_j0_first_zero, bessel_j1_first_zero, bessel_j1_prime_first_zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Dirichlet,
    Neumann,
    Stokes,
    Maxwell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    pub label: &'static str,
    /// Position in the ascending eigenvalue list.
    pub index: usize,
    pub value: f64,
    pub rel_tol: f64,
    pub provenance: &'static str,
}

/// Domain of a generated mesh, recovered from its tag (`"<spec> n=<n>"`).
pub fn domain_of(mesh: &SimplicialMesh) -> Option<(DomainSpec, usize)> {
    let (spec, n) = mesh.domain_tag.rsplit_once(" n=")?;
    Some((spec.parse().ok()?, n.parse().ok()?))
}

pub fn eigen_oracle(problem: Problem, domain: &DomainSpec) -> Option<Oracle> {
    let pi2 = PI * PI;
    let o = |label, index, value, rel_tol, provenance| Some(Oracle { label, index, value, rel_tol, provenance });
    match (problem, domain) {
        (Problem::Dirichlet, DomainSpec::Square) => o("lambda1", 0, 2.0 * pi2, 0.01, "closed form: separation of variables"),
        (Problem::Dirichlet, DomainSpec::Disk) => o("lambda1", 0, bessel_j0_first_zero().powi(2), 0.01, "closed form: first zero of J0, squared"),
        (Problem::Neumann, DomainSpec::Square) => o("mu2", 1, pi2, 0.01, "closed form: cos(pi x) mode"),
        (Problem::Neumann, DomainSpec::Disk) => o("mu2", 1, bessel_j1_prime_first_zero().powi(2), 0.01, "closed form: first zero of J1', squared"),
        (Problem::Stokes, DomainSpec::Disk) => o("gamma1", 0, bessel_j1_first_zero().powi(2), 0.02, "closed form: first zero of J1, squared"),
        (Problem::Maxwell, DomainSpec::Square) => o("alpha1", 0, pi2, 0.02, "alpha1 = mu2 in 2D; Neumann cos(pi x) mode"),
        (Problem::Maxwell, DomainSpec::Disk) => o("alpha1", 0, bessel_j1_prime_first_zero().powi(2), 0.02, "alpha1 = mu2 in 2D; first zero of J1', squared"),
        (Problem::Maxwell, DomainSpec::Cube) => o("alpha1", 0, 2.0 * pi2, 0.03, "closed form: cavity modes pi^2(m^2+n^2+p^2)"),
        _ => None,
    }
}

/// Report caveats required for polyhedral domains and unverified topology.
pub fn domain_notes(mesh: &SimplicialMesh, euler: i64) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some((spec, _)) = domain_of(mesh) {
        if matches!(spec, DomainSpec::Square | DomainSpec::Cube | DomainSpec::LShape) {
            notes.push("formal C^{1,1} hypothesis not met; classical result used as oracle".into());
        }
    } else {
        notes.push("user-supplied mesh: domain not recognized, no oracle".into());
    }
    if euler != 1 {
        notes.push(format!(
            "Euler characteristic {euler} != 1: harmonic fields are not excluded, spectra may contain extra modes"
        ));
    }
    notes
}
