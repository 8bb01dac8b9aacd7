//! Minimize the Beltrami defect J under each boundary condition.
//!
//! The tangent-zero cube admits no nontrivial Beltrami field, so its minimum
//! stays well above the normal-zero ball, which contains the spheromak.

use beltrami_lab::geometry::{generate_mesh, DomainSpec};
use beltrami_lab::probe::{beltrami_defect_min_with, ProbeBc, ProbeOptions};

fn main() -> beltrami_lab::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let opts = ProbeOptions { iters: 1000, restarts: 2, ..Default::default() };
    let ball = generate_mesh(&DomainSpec::Ball, n)?;
    let cube = generate_mesh(&DomainSpec::Cube, n)?;
    let free = beltrami_defect_min_with(&ball, ProbeBc::NormalZero, &opts)?;
    let stuck = beltrami_defect_min_with(&cube, ProbeBc::TangentZero, &opts)?;
    println!("ball, u·ν = 0: J = {:.4e} over {} dofs", free.j_final, free.n_dofs);
    println!("cube, u×ν = 0: J = {:.4e} over {} dofs", stuck.j_final, stuck.n_dofs);
    println!("ratio {:.1}", stuck.j_final / free.j_final);
    let t = &stuck.trajectory;
    println!("cube trajectory: J(0) {:.3e}, J({}) {:.3e}", t[0], t.len() / 2, t[t.len() / 2]);
    Ok(())
}
