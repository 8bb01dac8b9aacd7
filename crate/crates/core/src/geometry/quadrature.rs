//! Quadrature rules on the reference simplex.
//!
//! Orders 1 and 2 use the classical symmetric rules. Higher orders use
//! collapsed Gauss–Jacobi products (Stroud's conical rules), whose nodes come
//! from the Golub–Welsch eigenvalue problem; all weights are positive.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 10;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub dim: usize,
    /// Barycentric coordinates, `dim + 1` entries each.
    pub points: Vec<Vec<f64>>,
    /// Weights summing to the reference measure `1 / dim!`.
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss–Jacobi nodes and weights on `[-1, 1]` for weight `(1 - x)^a`.
fn gauss_jacobi(m: usize, a: u32) -> (Vec<f64>, Vec<f64>) {
    let a = f64::from(a);
    let b = 0.0;
    let mut t = DMatrix::zeros(m, m);
    for k in 0..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        t[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < m {
            let n = kf + 1.0;
            let s = 2.0 * n + a + b;
            let beta = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
            t[(k, k + 1)] = beta.sqrt();
            t[(k + 1, k)] = beta.sqrt();
        }
    }
    // ∫_{-1}^{1} (1 - x)^a dx
    let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Gauss rule on `[0, 1]` against `(1 - u)^a du`.
fn collapsed_axis(m: usize, a: u32) -> Vec<(f64, f64)> {
    let (x, w) = gauss_jacobi(m, a);
    let scale = 0.5f64.powi(a as i32 + 1);
    x.iter().zip(&w).map(|(xi, wi)| (0.5 * (1.0 + xi), wi * scale)).collect()
}

fn conical(dim: usize, order: usize) -> QuadratureRule {
    let m = order / 2 + 1;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match dim {
        1 => {
            for (u, w) in collapsed_axis(m, 0) {
                points.push(vec![1.0 - u, u]);
                weights.push(w);
            }
        }
        2 => {
            for (u, wu) in collapsed_axis(m, 1) {
                for (v, wv) in collapsed_axis(m, 0) {
                    let x = u;
                    let y = (1.0 - u) * v;
                    points.push(vec![1.0 - x - y, x, y]);
                    weights.push(wu * wv);
                }
            }
        }
        _ => {
            for (u, wu) in collapsed_axis(m, 2) {
                for (v, wv) in collapsed_axis(m, 1) {
                    for (w, ww) in collapsed_axis(m, 0) {
                        let x = u;
                        let y = (1.0 - u) * v;
                        let z = (1.0 - u) * (1.0 - v) * w;
                        points.push(vec![1.0 - x - y - z, x, y, z]);
                        weights.push(wu * wv * ww);
                    }
                }
            }
        }
    }
    QuadratureRule { dim, points, weights, order }
}

/// Rule on the reference `simplex_dim`-simplex exact for polynomials of the
/// given total degree.
pub fn quad_rule(simplex_dim: usize, order: usize) -> Result<QuadratureRule> {
    if !(1..=3).contains(&simplex_dim) || order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedQuadrature { dim: simplex_dim, order });
    }
    let rule = match (simplex_dim, order) {
        (2, 1) => QuadratureRule {
            dim: 2,
            points: vec![vec![1.0 / 3.0; 3]],
            weights: vec![0.5],
            order: 1,
        },
        (2, 2) => QuadratureRule {
            dim: 2,
            points: vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5]],
            weights: vec![1.0 / 6.0; 3],
            order: 2,
        },
        (3, 1) => QuadratureRule {
            dim: 3,
            points: vec![vec![0.25; 4]],
            weights: vec![1.0 / 6.0],
            order: 1,
        },
        (3, 2) => {
            let a = 0.585_410_196_624_968_5;
            let b = 0.138_196_601_125_010_5;
            QuadratureRule {
                dim: 3,
                points: vec![vec![a, b, b, b], vec![b, a, b, b], vec![b, b, a, b], vec![b, b, b, a]],
                weights: vec![1.0 / 24.0; 4],
                order: 2,
            }
        }
        (d, p) => conical(d, p),
    };
    Ok(rule)
}
