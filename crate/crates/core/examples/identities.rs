//! The div–curl integral identities on a polynomial and a Beltrami field,
//! plus the two pointwise identities.

use beltrami_lab::fields::{make_polynomial_weight, make_trig_beltrami, PolynomialField, Poly};
use beltrami_lab::geometry::{generate_mesh, DomainSpec, Vec3};
use beltrami_lab::identity::{check_curl_cross_pointwise, check_green_curl, check_lagrange_pointwise, check_weighted};

fn main() -> beltrami_lab::Result<()> {
    let cube = generate_mesh(&DomainSpec::Cube, 4)?;
    let u = PolynomialField::parse(3, "x1^2 - x2*x3, x1*x3 + x2, x2^2 - x1")?;
    let phi = make_polynomial_weight(3, Poly::parse("x^3 + y*z - 2*x*y*z")?)?;
    let r = check_green_curl(&u, &phi, &cube, 5)?;
    println!("green, polynomial u on cube: rel residual {:.2e}", r.rel_residual);
    for t in &r.terms {
        println!("  {:<24} {:+.12}", t.name, t.value);
    }

    let trig = make_trig_beltrami(1.0)?;
    for n in [4, 8] {
        let shell = generate_mesh(&DomainSpec::Shell { r0: 1.0, r1: 2.0 }, n)?;
        let w = check_weighted(&trig, 1.0, &shell, 3)?;
        println!(
            "weighted α=1 on shell n={n}: |E1-E2|/scale {:.2e}  |E2-E3|/scale {:.2e}",
            w.rel_residual,
            w.alt_rel_residual.unwrap_or(f64::NAN)
        );
    }

    let lag = check_lagrange_pointwise(&Vec3::new(1.0, -2.0, 0.5), &Vec3::new(0.3, 0.7, -1.1), &Vec3::new(0.0, 0.6, 0.8));
    let cc = check_curl_cross_pointwise(&trig, &u, &Vec3::new(0.2, -0.4, 0.9), 1e-4);
    println!("lagrange residual {lag:.1e}, curl(a × b) residual {cc:.1e}");
    Ok(())
}
