//! Observed orders and Richardson extrapolation on the unit square.

use beltrami_lab::convergence::{fit_order, richardson3};
use beltrami_lab::eig2d::maxwell_eigs_2d;
use beltrami_lab::geometry::{generate_mesh, DomainSpec};

fn main() -> beltrami_lab::Result<()> {
    let exact = std::f64::consts::PI.powi(2);
    let ns = [8usize, 16, 32];
    let hs = ns.map(|n| 1.0 / n as f64);
    let mut vals = [0.0; 3];
    for (v, &n) in vals.iter_mut().zip(&ns) {
        *v = maxwell_eigs_2d(&generate_mesh(&DomainSpec::Square, n)?, 1)?.eigenvalues[0];
        println!("n={n:<3} α₁ {v:.8}  error {:.2e}", (*v - exact).abs());
    }
    let order = fit_order(&hs, &vals.map(|v| (v - exact).abs()))?;
    let (ext, p) = richardson3(hs, vals)?;
    println!("fitted order {order:.3}; Richardson {ext:.8} (order {p:.3}), exact π² {exact:.8}");
    Ok(())
}
