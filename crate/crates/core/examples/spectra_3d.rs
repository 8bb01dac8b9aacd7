//! Maxwell and Stokes eigenvalues on the cube and ball: α₁ sits below γ₁.

use beltrami_lab::eig3d::{maxwell_eigs_3d, stokes_eigs_3d};
use beltrami_lab::geometry::{generate_mesh, DomainSpec};

fn main() -> beltrami_lab::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    for spec in [DomainSpec::Cube, DomainSpec::Ball] {
        let mesh = generate_mesh(&spec, n)?;
        let a = maxwell_eigs_3d(&mesh, 4)?;
        let g = stokes_eigs_3d(&mesh, 2)?;
        println!("{spec} n={n}");
        println!("  maxwell {:?}", a.eigenvalues.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
        println!("  stokes  {:?}", g.eigenvalues.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
        println!("  multiplier norm {:.1e}", a.constraint_residuals.iter().fold(0.0f64, |m, v| m.max(*v)));
    }
    println!("cube reference α₁ = 2π² = {:.4}", 2.0 * std::f64::consts::PI.powi(2));
    Ok(())
}
