//! Max-margin star-center linear program.
//!
//! The primal `max t  s.t.  ν_f·x + t <= ν_f·c_f` has `d + 1` free variables
//! and one row per facet. It is solved through its dual
//! `min Σ β_f y_f  s.t.  Σ y_f ν_f = 0, Σ y_f = 1, y >= 0`, whose `d + 1`
//! equality rows keep the simplex basis tiny. The primal optimum is the
//! vector of simplex multipliers of the dual.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    pub dim: usize,
}

impl LpProblem {
    /// Half-spaces `ν_f·x + t <= offset_f`. Normals are rescaled to unit length.
    pub fn new(dim: usize, normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidInput(format!("LP dimension {dim} not in {{2, 3}}")));
        }
        if normals.len() != offsets.len() {
            return Err(Error::DimensionMismatch("normals vs offsets".into()));
        }
        if normals.len() < dim + 1 {
            return Err(Error::InvalidInput(format!(
                "need at least {} constraints, got {}",
                dim + 1,
                normals.len()
            )));
        }
        let mut n2 = Vec::with_capacity(normals.len());
        let mut o2 = Vec::with_capacity(offsets.len());
        for (n, o) in normals.into_iter().zip(offsets) {
            if n.len() != dim {
                return Err(Error::DimensionMismatch("normal length".into()));
            }
            let len = n.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(len > 0.0) {
                return Err(Error::InvalidInput("zero constraint normal".into()));
            }
            n2.push(n.iter().map(|v| v / len).collect());
            o2.push(o / len);
        }
        Ok(Self {
            normals: n2,
            offsets: o2,
            dim,
        })
    }

    /// Worst-case slack `min_f (offset_f - ν_f·x)` at a candidate point.
    pub fn margin_at(&self, x: &[f64]) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, o)| o - n.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

enum Simplex {
    Optimal { duals: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Revised simplex with Bland's rule for `min c^T y, A y = b, y >= 0`.
fn simplex_min(a: &DMatrix<f64>, b: &[f64], c: &[f64]) -> Simplex {
    let r = a.nrows();
    let m = a.ncols();
    let eps = 1e-11;

    // Rows flipped so that b >= 0; artificial columns m..m+r.
    let mut aa = DMatrix::zeros(r, m + r);
    let mut bb = vec![0.0; r];
    for i in 0..r {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..m {
            aa[(i, j)] = s * a[(i, j)];
        }
        aa[(i, m + i)] = 1.0;
        bb[i] = s * b[i];
    }
    let mut basis: Vec<usize> = (m..m + r).collect();

    let run = |basis: &mut Vec<usize>, cost: &[f64], allowed: &dyn Fn(usize) -> bool| -> Option<bool> {
        // returns Some(true) optimal, Some(false) unbounded
        for _ in 0..50_000 {
            let bmat = DMatrix::from_fn(r, r, |i, k| aa[(i, basis[k])]);
            let binv = bmat.try_inverse()?;
            let cb = DVector::from_fn(r, |k, _| cost[basis[k]]);
            let pi = binv.transpose() * &cb;
            let xb = &binv * DVector::from_column_slice(&bb);
            // Entering column: smallest index with negative reduced cost.
            let mut enter = None;
            for j in 0..m + r {
                if !allowed(j) || basis.contains(&j) {
                    continue;
                }
                let rc = cost[j] - (0..r).map(|i| pi[i] * aa[(i, j)]).sum::<f64>();
                if rc < -eps {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return Some(true) };
            let col = &binv * DVector::from_fn(r, |i, _| aa[(i, j)]);
            let mut leave: Option<(f64, usize, usize)> = None;
            for k in 0..r {
                if col[k] > eps {
                    let ratio = xb[k].max(0.0) / col[k];
                    let better = match leave {
                        None => true,
                        Some((best, _, bidx)) => {
                            ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[k] < bidx)
                        }
                    };
                    if better {
                        leave = Some((ratio, k, basis[k]));
                    }
                }
            }
            let Some((_, k, _)) = leave else { return Some(false) };
            basis[k] = j;
        }
        Some(true)
    };

    // Phase I.
    let mut cost1 = vec![0.0; m + r];
    for v in cost1.iter_mut().skip(m) {
        *v = 1.0;
    }
    match run(&mut basis, &cost1, &|_| true) {
        Some(true) => {}
        _ => return Simplex::Infeasible,
    }
    let bmat = DMatrix::from_fn(r, r, |i, k| aa[(i, basis[k])]);
    let Some(binv) = bmat.try_inverse() else { return Simplex::Infeasible };
    let xb = &binv * DVector::from_column_slice(&bb);
    let infeas: f64 = (0..r).filter(|&k| basis[k] >= m).map(|k| xb[k]).sum();
    let scale = bb.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    if infeas > 1e-9 * scale {
        return Simplex::Infeasible;
    }
    // Drive zero-level artificials out of the basis.
    for k in 0..r {
        if basis[k] < m {
            continue;
        }
        let bmat = DMatrix::from_fn(r, r, |i, q| aa[(i, basis[q])]);
        let binv = bmat.try_inverse().expect("basis stays nonsingular");
        let row = binv.row(k);
        let swap = (0..m).find(|&j| {
            !basis.contains(&j) && (0..r).map(|i| row[i] * aa[(i, j)]).sum::<f64>().abs() > 1e-9
        });
        match swap {
            Some(j) => basis[k] = j,
            None => return Simplex::Infeasible, // redundant row: not expected for facet sets
        }
    }

    // Phase II.
    let mut cost2 = vec![0.0; m + r];
    cost2[..m].copy_from_slice(c);
    match run(&mut basis, &cost2, &|j| j < m) {
        Some(true) => {}
        Some(false) => return Simplex::Unbounded,
        None => return Simplex::Infeasible,
    }
    let bmat = DMatrix::from_fn(r, r, |i, k| aa[(i, basis[k])]);
    let binv = bmat.try_inverse().expect("optimal basis nonsingular");
    let cb = DVector::from_fn(r, |k, _| cost2[basis[k]]);
    let pi = binv.transpose() * cb;
    let xb = &binv * DVector::from_column_slice(&bb);
    let value = (0..r).map(|k| cost2[basis[k]] * xb[k]).sum();
    // Undo the row flips on the multipliers.
    let duals = (0..r)
        .map(|i| if b[i] < 0.0 { -pi[i] } else { pi[i] })
        .collect();
    Simplex::Optimal { duals, value }
}

/// Maximizes the worst-case margin `t` over centers `x`. Returns `None` when the
/// optimum is below `-tol` (empty kernel).
pub fn lp_max_margin(p: &LpProblem, tol: f64) -> Result<Option<(Vec<f64>, f64)>> {
    let d = p.dim;
    let m = p.normals.len();
    let a = DMatrix::from_fn(d + 1, m, |i, f| if i < d { p.normals[f][i] } else { 1.0 });
    let mut b = vec![0.0; d + 1];
    b[d] = 1.0;
    match simplex_min(&a, &b, &p.offsets) {
        Simplex::Optimal { duals, value } => {
            let x: Vec<f64> = duals[..d].to_vec();
            // The primal margin at the recovered point is the certified value.
            let t = p.margin_at(&x);
            let t = if (t - value).abs() <= 1e-9 * (1.0 + value.abs()) { t } else { t.min(value) };
            if t < -tol {
                Ok(None)
            } else {
                Ok(Some((x, t)))
            }
        }
        // Dual infeasible: the facet normals do not surround the origin.
        Simplex::Infeasible => Err(Error::UnboundedLp),
        Simplex::Unbounded => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> LpProblem {
        LpProblem::new(
            2,
            vec![vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0]],
            vec![0.0, 1.0, 0.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn unit_square_center() {
        let (x, t) = lp_max_margin(&square(), 1e-9).unwrap().unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
        assert!((t - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unit_cube_center() {
        let mut n = Vec::new();
        let mut o = Vec::new();
        for i in 0..3 {
            let mut lo = vec![0.0; 3];
            lo[i] = -1.0;
            let mut hi = vec![0.0; 3];
            hi[i] = 1.0;
            n.push(lo);
            o.push(0.0);
            n.push(hi);
            o.push(1.0);
        }
        let p = LpProblem::new(3, n, o).unwrap();
        let (x, t) = lp_max_margin(&p, 1e-9).unwrap().unwrap();
        for xi in x {
            assert!((xi - 0.5).abs() < 1e-12);
        }
        assert!((t - 0.5).abs() < 1e-12);
    }

    #[test]
    fn half_plane_set_is_unbounded() {
        // All normals in the upper half plane: t can grow without bound.
        let p = LpProblem::new(
            2,
            vec![vec![0.0, 1.0], vec![0.6, 0.8], vec![-0.6, 0.8]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        assert!(matches!(lp_max_margin(&p, 1e-9), Err(Error::UnboundedLp)));
    }

    #[test]
    fn too_few_constraints() {
        assert!(LpProblem::new(2, vec![vec![1.0, 0.0]; 2], vec![0.0; 2]).is_err());
    }
}
