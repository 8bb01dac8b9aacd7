//! Generate each built-in domain, check the discrete divergence theorem and
//! look for a star center.

use beltrami_lab::geometry::{generate_mesh, star_kernel, DomainSpec, DEFAULT_STAR_TOL};

fn main() -> beltrami_lab::Result<()> {
    for name in ["square", "disk", "lshape", "annulus(1,2)", "cube", "ball", "shell(1,2)"] {
        let spec: DomainSpec = name.parse()?;
        let n = if spec.dim() == 2 { 16 } else { 6 };
        let mesh = generate_mesh(&spec, n)?;
        let star = match star_kernel(&mesh, DEFAULT_STAR_TOL) {
            Some((c, t)) => format!("center ({:.3}, {:.3}, {:.3}) margin {t:.4}", c.x, c.y, c.z),
            None => "not star-shaped".to_string(),
        };
        println!(
            "{name:<13} {:>6} cells  volume {:.5} (exact {:.5})  |Σ ν dS| {:.1e}  {star}",
            mesh.n_cells(),
            mesh.total_volume(),
            spec.exact_volume(),
            mesh.normal_balance().norm(),
        );
    }
    Ok(())
}
