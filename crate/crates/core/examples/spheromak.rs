//! The spheromak on the unit ball: its eigenvalue, Beltrami residuals and the
//! jump in the residuals when λ is perturbed.

use beltrami_lab::geometry::{generate_mesh, DomainSpec};
use beltrami_lab::linalg::roots::spheromak_eigenvalue;
use beltrami_lab::probe::spheromak_verify;

fn main() -> beltrami_lab::Result<()> {
    let lambda = spheromak_eigenvalue();
    println!("first root of tan x = x: {lambda:.10}");
    let ball = generate_mesh(&DomainSpec::Ball, 8)?;
    for l in [lambda, 1.05 * lambda] {
        let r = spheromak_verify(&ball, l)?;
        println!(
            "λ = {l:.5}: cross {:.1e}  div {:.1e}  u·ν on sphere {:.1e}  curl u - λ₀u {:.1e}  facet u·ν {:.1e}",
            r.cross_rel, r.div_rel, r.trace_rel, r.eigen_rel, r.facet_trace_rel
        );
    }
    Ok(())
}
