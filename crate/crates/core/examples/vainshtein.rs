//! Smallest eigenvalue of the form ‖curl u - λu‖² / ‖u‖² over admissible fields.

use beltrami_lab::geometry::{generate_mesh, DomainSpec};
use beltrami_lab::linalg::roots::spheromak_eigenvalue;
use beltrami_lab::probe::{vainshtein_check, vainshtein_check_with, ProbeBc};

fn main() -> beltrami_lab::Result<()> {
    let grid = [1.0, 3.0, spheromak_eigenvalue(), 7.0];
    for n in [4, 6] {
        let cube = generate_mesh(&DomainSpec::Cube, n)?;
        let rows = vainshtein_check(&grid, &cube)?;
        let ball = generate_mesh(&DomainSpec::Ball, n)?;
        let b = vainshtein_check_with(&grid[2..3], &ball, ProbeBc::NormalZero)?;
        let c: Vec<String> = rows.iter().map(|r| format!("{:.2}", r.min_eigenvalue)).collect();
        println!("n={n}  cube u×ν=0 {c:?}   ball u·ν=0 at λ₀ {:.3}", b[0].min_eigenvalue);
    }
    Ok(())
}
