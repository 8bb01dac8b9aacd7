//! Boundary traces of the first cube eigenfields and the curl duality
//! between the two Maxwell boundary conditions.

use beltrami_lab::eig3d::{beta_duality_check, maxwell_eigs_3d, maxwell_trace_report, stokes_eigs_3d, stokes_trace_report};
use beltrami_lab::geometry::{generate_mesh, DomainSpec};

fn main() -> beltrami_lab::Result<()> {
    for n in [4, 6, 8] {
        let cube = generate_mesh(&DomainSpec::Cube, n)?;
        let mx = maxwell_eigs_3d(&cube, 1)?;
        let t = maxwell_trace_report(&mx, 0, &cube)?;
        let b = beta_duality_check(&mx, 0, &cube)?;
        let st = stokes_eigs_3d(&cube, 1)?;
        let s = stokes_trace_report(&st, 0, &cube)?;
        println!(
            "n={n}  maxwell |u×ν| {:.1e} |u·ν| {:.3} |curl u×ν| {:.3}  stokes |curl u×ν| {:.3}  I(curl u) {:.4} vs α₁ {:.4} ({:.1}%)",
            t.norm_u_cross_nu,
            t.norm_u_dot_nu,
            t.norm_curlu_cross_nu,
            s.norm_curlu_cross_nu,
            b.rayleigh,
            b.alpha,
            100.0 * b.rel_error
        );
    }
    Ok(())
}
