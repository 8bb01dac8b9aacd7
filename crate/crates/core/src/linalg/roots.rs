//! Bracketed scalar root finding and the Bessel series used by the analytic oracles.

use crate::error::{Error, Result};

/// Brent's method on `[a, b]` with a bisection safeguard.
///
/// Stops once `|f(x)| <= tol * max(|f(a)|, |f(b)|)` or the bracket has shrunk
/// to a few ulps.
pub fn find_root_bracketed<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange { a, b, fa, fb });
    }
    let ftol = tol * fa.abs().max(fb.abs());
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs();
        let m = 0.5 * (c - b);
        if fb.abs() <= ftol || m.abs() <= xtol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b);
    }
    Ok(b)
}

/// Ascending series `Σ_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`, accurate for `|x| <= 12`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    let q = -half * half;
    for k in 1..200u32 {
        term *= q / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

/// `J_1'(x) = J_0(x) - J_1(x)/x`.
pub fn bessel_j1_prime(x: f64) -> f64 {
    if x == 0.0 {
        0.5
    } else {
        bessel_j0(x) - bessel_j1(x) / x
    }
}

/// `j_1(s)/s = Σ_k (-1)^k s^{2k} / (2^k k! (2k+3)!!)`.
pub fn spherical_j1_over_x(s: f64) -> f64 {
    let q = -0.5 * s * s;
    let mut term = 1.0 / 3.0;
    let mut sum = term;
    for k in 1..200u32 {
        let kf = f64::from(k);
        term *= q / (kf * (2.0 * kf + 3.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

/// `(d/ds)(j_1(s)/s) / s`, smooth at the origin.
pub fn spherical_j1_over_x_deriv_over_x(s: f64) -> f64 {
    // Term by term: 2k c_k s^{2k-1} / s = 2k c_k s^{2k-2}.
    let mut coef = 1.0 / 3.0;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 1..200u32 {
        let kf = f64::from(k);
        coef *= -0.5 / (kf * (2.0 * kf + 3.0));
        let term = 2.0 * kf * coef * pow;
        sum += term;
        pow *= s * s;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

/// Spherical Bessel `j_1(s)`.
pub fn spherical_j1(s: f64) -> f64 {
    s * spherical_j1_over_x(s)
}

/// First positive root of `tan x = x` (first zero of `j_1`), ≈ 4.4934095.
pub fn spheromak_eigenvalue() -> f64 {
    let pi = std::f64::consts::PI;
    find_root_bracketed(|x| x.tan() - x, pi + 0.01, 1.5 * pi - 0.01, 1e-14).expect("bracket")
}

/// First zero of `J_0`, ≈ 2.4048256.
pub fn bessel_j0_first_zero() -> f64 {
    find_root_bracketed(bessel_j0, 2.0, 3.0, 1e-14).expect("bracket")
}

/// First zero of `J_1`, ≈ 3.8317060.
pub fn bessel_j1_first_zero() -> f64 {
    find_root_bracketed(bessel_j1, 3.0, 4.5, 1e-14).expect("bracket")
}

/// First zero of `J_1'`, ≈ 1.8411838.
pub fn bessel_j1_prime_first_zero() -> f64 {
    find_root_bracketed(bessel_j1_prime, 1.0, 2.5, 1e-14).expect("bracket")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sqrt_two() {
        let r = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 5e-8);
        assert!((r * r - 2.0).abs() <= 1e-12 * 2.0);
    }

    #[test]
    fn tan_x_minus_x() {
        let f = |x: f64| x.tan() - x;
        let (a, b) = (PI + 0.01, 1.5 * PI - 0.01);
        let r = find_root_bracketed(f, a, b, 1e-12).unwrap();
        assert!((r - 4.4934095).abs() < 5e-8);
        assert!(f(r).abs() <= 1e-12 * f(a).abs().max(f(b).abs()));
    }

    #[test]
    fn j0_zero() {
        let r = find_root_bracketed(bessel_j0, 2.0, 3.0, 1e-12).unwrap();
        assert!((r - 2.4048256).abs() < 5e-8);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn bessel_values_against_bisection_roots() {
        assert!((bessel_j1_first_zero() - 3.8317060).abs() < 5e-8);
        assert!((bessel_j1_prime_first_zero() - 1.8411838).abs() < 5e-8);
        // J_0(1) and J_1(1) reference values
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn spherical_series_match_closed_form() {
        for &s in &[0.3f64, 1.0, 2.5, 4.0, 6.0, 9.0] {
            let closed = (s.sin() - s * s.cos()) / (s * s * s);
            assert!((spherical_j1_over_x(s) - closed).abs() < 1e-13, "s={s}");
            let dclosed = (s * s * s.sin() - 3.0 * s.sin() + 3.0 * s * s.cos()) / s.powi(5);
            assert!(
                (spherical_j1_over_x_deriv_over_x(s) - dclosed).abs() < 1e-12,
                "s={s}: {} vs {}",
                spherical_j1_over_x_deriv_over_x(s),
                dclosed
            );
        }
        assert!((spherical_j1_over_x_deriv_over_x(0.0) + 1.0 / 15.0).abs() < 1e-16);
    }
}
