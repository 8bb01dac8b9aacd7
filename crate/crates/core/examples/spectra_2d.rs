//! Dirichlet, Neumann, Stokes and Maxwell spectra on the unit disk.

use beltrami_lab::eig2d::{laplace_dirichlet_eigs, laplace_neumann_eigs, maxwell_eigs_2d, stokes_eigs_2d};
use beltrami_lab::geometry::{generate_mesh, DomainSpec};
use beltrami_lab::linalg::roots::{bessel_j0_first_zero, bessel_j1_first_zero, bessel_j1_prime_first_zero};

fn main() -> beltrami_lab::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    let disk = generate_mesh(&DomainSpec::Disk, n)?;
    let lambda1 = laplace_dirichlet_eigs(&disk, 3)?;
    let mu = laplace_neumann_eigs(&disk, 3)?;
    let gamma = stokes_eigs_2d(&disk, 3)?;
    let alpha = maxwell_eigs_2d(&disk, 3)?;

    let sq = |x: f64| x * x;
    println!("disk n={n}");
    println!("  λ₁ {:.6}  (j₀,₁² = {:.6})", lambda1.eigenvalues[0], sq(bessel_j0_first_zero()));
    println!("  μ₂ {:.6}  (j'₁,₁² = {:.6})", mu.eigenvalues[1], sq(bessel_j1_prime_first_zero()));
    println!("  γ₁ {:.6}  (j₁,₁² = {:.6})", gamma.eigenvalues[0], sq(bessel_j1_first_zero()));
    println!("  α₁ {:.6}  (should match μ₂)", alpha.eigenvalues[0]);
    Ok(())
}
