//! Shift-invert Lanczos for the generalized symmetric pencil `A x = λ M x`.
//!
//! The operator `(A - σM)^{-1} M` is self-adjoint in the `M` inner product.
//! Each Lanczos run uses full reorthogonalization; converged Ritz pairs are
//! locked and later runs are restarted from a fresh random vector deflated
//! against them, which recovers every copy of a repeated eigenvalue. `M` may
//! be singular on a multiplier block (mixed pencils); starting vectors are
//! purified by one application of the operator so that all Krylov vectors
//! satisfy the constraint rows.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ldl::{LdlFactor, LdlOptions};
use crate::linalg::sparse::{axpy, dot, norm2, SparseMat};

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilKind {
    LaplaceDirichlet,
    LaplaceNeumann,
    Stokes,
    Maxwell,
}

impl std::fmt::Display for PencilKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PencilKind::LaplaceDirichlet => "laplace-dirichlet",
            PencilKind::LaplaceNeumann => "laplace-neumann",
            PencilKind::Stokes => "stokes",
            PencilKind::Maxwell => "maxwell",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolverStats {
    /// Total operator applications (linear solves) over all runs.
    pub iterations: usize,
    pub runs: usize,
    /// `‖A x - λ M x‖ / ((‖A‖∞ + |λ| ‖M‖∞) ‖x‖)` for each returned pair.
    pub residual_norms: Vec<f64>,
    pub shift: f64,
    pub converged: bool,
    pub regularized_pivots: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub pencil_kind: Option<PencilKind>,
    pub mesh_id: String,
    pub solver_stats: SolverStats,
    /// Per-pair constraint residual of mixed pencils (`‖B u‖/‖u‖` for Stokes,
    /// relative multiplier norm for Maxwell); empty otherwise.
    #[serde(default)]
    pub constraint_residuals: Vec<f64>,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    pub seed: u64,
    /// Lanczos steps per run.
    pub max_steps: usize,
    pub max_runs: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            max_steps: 240,
            max_runs: 12,
        }
    }
}

/// The `k` smallest eigenvalues of `A x = λ M x` lying above `shift`.
pub fn gen_eig_smallest(
    a: &SparseMat,
    m: &SparseMat,
    k: usize,
    shift: f64,
    tol: f64,
) -> Result<EigenResult> {
    gen_eig_smallest_with(a, m, k, shift, tol, &EigenOptions::default())
}

struct ShiftInvert<'a> {
    a: &'a SparseMat,
    m: &'a SparseMat,
    shifted: SparseMat,
    factor: LdlFactor,
    shift: f64,
    refine: bool,
}

impl ShiftInvert<'_> {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mx = self.m.mul_vec(x);
        self.solve(&mx)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        if self.refine {
            self.factor.solve_refined(&self.shifted, b)
        } else {
            self.factor.solve(b)
        }
    }
}

fn build_shift_invert<'a>(a: &'a SparseMat, m: &'a SparseMat, shift: f64) -> Result<ShiftInvert<'a>> {
    let n = a.n_rows;
    // Rows with no mass and a zero diagonal are constraint (multiplier) rows.
    let mdiag = m.diagonal();
    let adiag = a.diagonal();
    let constraint: Vec<bool> = (0..n)
        .map(|i| mdiag[i] == 0.0 && m.row_is_zero(i) && adiag[i] == 0.0)
        .collect();
    let mixed = constraint.iter().any(|&c| c);

    let mut sigma = shift;
    let mut last_err = None;
    for attempt in 0..4 {
        let shifted = if sigma == 0.0 { a.clone() } else { a.add_scaled(m, -sigma)? };
        let opts = if mixed {
            LdlOptions {
                signs: Some(constraint.iter().map(|&c| if c { -1 } else { 1 }).collect()),
                ..Default::default()
            }
        } else {
            LdlOptions::default()
        };
        match LdlFactor::with_options(&shifted, &opts) {
            Ok(factor) => {
                let refine = mixed || factor.regularized_pivots() > 0;
                return Ok(ShiftInvert {
                    a,
                    m,
                    shifted,
                    factor,
                    shift: sigma,
                    refine,
                });
            }
            Err(e @ Error::SingularPivot { .. }) => {
                last_err = Some(e);
                let bump = 1e-3 * (1.0 + sigma.abs()) * (attempt as f64 + 1.0);
                sigma -= bump;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

pub fn gen_eig_smallest_with(
    a: &SparseMat,
    m: &SparseMat,
    k: usize,
    shift: f64,
    tol: f64,
    opts: &EigenOptions,
) -> Result<EigenResult> {
    if !a.is_square() || !m.is_square() || a.n_rows != m.n_rows {
        return Err(Error::DimensionMismatch(format!(
            "pencil shapes {}x{} and {}x{}",
            a.n_rows, a.n_cols, m.n_rows, m.n_cols
        )));
    }
    let n = a.n_rows;
    let op = build_shift_invert(a, m, shift)?;
    let mut stats = SolverStats {
        shift: op.shift,
        regularized_pivots: op.factor.regularized_pivots(),
        ..Default::default()
    };
    if k == 0 || n == 0 {
        stats.converged = true;
        return Ok(EigenResult {
            eigenvalues: vec![],
            eigenvectors: vec![],
            pencil_kind: None,
            mesh_id: String::new(),
            solver_stats: stats,
            constraint_residuals: vec![],
        });
    }

    // Locked pairs: M-orthonormal vectors, their M-images, and eigenvalues.
    let mut locked: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut all_converged = true;
    let lanczos_tol = tol.max(1e-14);

    for run in 0..opts.max_runs {
        stats.runs += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(run as u64));
        let raw: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut v = op.apply(&raw);
        stats.iterations += 1;
        let mut mv = m.mul_vec(&v);
        deflate(&mut v, &mut mv, &locked, None);
        let mut mv = m.mul_vec(&v);
        let nv = dot(&v, &mv).max(0.0).sqrt();
        if !(nv > 1e-300) {
            break; // search space exhausted
        }
        v.iter_mut().for_each(|x| *x /= nv);
        mv.iter_mut().for_each(|x| *x /= nv);

        let mut basis: Vec<Vec<f64>> = vec![v];
        let mut mbasis: Vec<Vec<f64>> = vec![mv];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let want = k;
        let mut new_pairs: Vec<(f64, Vec<f64>)> = Vec::new();
        let mut run_converged = false;

        for j in 0..opts.max_steps {
            let mut w = op.apply(&basis[j]);
            stats.iterations += 1;
            let mut mw = m.mul_vec(&w);
            let aj = dot(&w, &mbasis[j]);
            alpha.push(aj);
            // Full reorthogonalization (twice is enough).
            for _ in 0..2 {
                deflate(&mut w, &mut mw, &locked, Some((&basis, &mbasis)));
            }
            // The running M-image drifts after heavy cancellation; recompute it.
            mw = m.mul_vec(&w);
            let bj = dot(&w, &mw).max(0.0).sqrt();
            let breakdown = !(bj > 1e-12 * aj.abs().max(1e-300));
            let steps = j + 1;
            let check = breakdown || steps == opts.max_steps || steps % 5 == 0 || steps == n;
            if check {
                let (thetas, vecs) = tridiag_eig(&alpha, &beta);
                // Largest theta <-> smallest eigenvalue above the shift.
                let mut order: Vec<usize> = (0..thetas.len()).collect();
                order.sort_by(|&x, &y| thetas[y].total_cmp(&thetas[x]));
                let count = want.min(thetas.len());
                let mut ok = true;
                for &i in order.iter().take(count) {
                    let err = if breakdown { 0.0 } else { (bj * vecs[(steps - 1, i)]).abs() };
                    if !(thetas[i] > 0.0) || err > lanczos_tol * thetas[i].abs() {
                        ok = false;
                        break;
                    }
                }
                let done = ok && (count == want || breakdown);
                if done || breakdown || steps == opts.max_steps || steps >= n {
                    // Collect converged Ritz pairs (all that are converged, up to `want`).
                    for &i in order.iter().take(count) {
                        let err = if breakdown { 0.0 } else { (bj * vecs[(steps - 1, i)]).abs() };
                        if thetas[i] > 0.0 && err <= lanczos_tol.max(1e-10) * thetas[i].abs() {
                            let mut x = vec![0.0; n];
                            for (b, q) in basis.iter().enumerate().take(steps) {
                                let c = vecs[(b, i)];
                                for (xi, qi) in x.iter_mut().zip(q) {
                                    *xi += c * qi;
                                }
                            }
                            new_pairs.push((op.shift + 1.0 / thetas[i], x));
                        }
                    }
                    run_converged = done;
                    break;
                }
            }
            if breakdown {
                break;
            }
            beta.push(bj);
            w.iter_mut().for_each(|x| *x /= bj);
            mw.iter_mut().for_each(|x| *x /= bj);
            basis.push(w);
            mbasis.push(mw);
        }
        if !run_converged {
            all_converged = false;
        }

        let prev_kth = kth_smallest(&locked, k);
        let run_min = new_pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        for (lam, mut x) in new_pairs {
            let mut mx = m.mul_vec(&x);
            for _ in 0..2 {
                deflate(&mut x, &mut mx, &locked, None);
            }
            let mut mx = m.mul_vec(&x);
            let nx = dot(&x, &mx).max(0.0).sqrt();
            if nx < 1e-8 {
                continue;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            mx.iter_mut().for_each(|v| *v /= nx);
            locked.push((lam, x, mx));
        }
        if locked.len() >= n {
            break;
        }
        if let Some(kth) = prev_kth {
            if run_min >= kth * (1.0 - 1e-10) || run_min.is_infinite() {
                break;
            }
        }
    }

    locked.sort_by(|x, y| x.0.total_cmp(&y.0));
    locked.truncate(k + 2);
    let mut pairs = polish(&op, locked, &mut stats);
    pairs.truncate(k);
    if pairs.len() < k && pairs.len() < n {
        all_converged = false;
    }

    let anorm = a.norm_inf();
    let mnorm = m.norm_inf();
    let mut eigenvalues = Vec::with_capacity(pairs.len());
    let mut eigenvectors = Vec::with_capacity(pairs.len());
    for (lam, mut x) in pairs {
        // Sign convention: largest-magnitude entry positive.
        let imax = x
            .iter()
            .enumerate()
            .max_by(|p, q| p.1.abs().total_cmp(&q.1.abs()))
            .map(|p| p.0)
            .unwrap_or(0);
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        let ax = op.a.mul_vec(&x);
        let mx = op.m.mul_vec(&x);
        let r: Vec<f64> = ax.iter().zip(&mx).map(|(p, q)| p - lam * q).collect();
        let denom = (anorm + lam.abs() * mnorm) * norm2(&x);
        let res = if denom > 0.0 { norm2(&r) / denom } else { norm2(&r) };
        stats.residual_norms.push(res);
        eigenvalues.push(lam);
        eigenvectors.push(x);
    }
    if stats.residual_norms.iter().any(|&r| r > tol.max(1e-12) * 1e3) {
        all_converged = false;
    }
    stats.converged = all_converged;
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        pencil_kind: None,
        mesh_id: String::new(),
        solver_stats: stats,
        constraint_residuals: vec![],
    })
}

/// Two sweeps of shift-invert subspace iteration with Rayleigh–Ritz on the
/// locked vectors. Sharpens vectors inside clusters of (nearly) repeated
/// eigenvalues, where single-vector Lanczos estimates are least reliable.
fn polish(op: &ShiftInvert<'_>, locked: Vec<(f64, Vec<f64>, Vec<f64>)>, stats: &mut SolverStats) -> Vec<(f64, Vec<f64>)> {
    let fallback: Vec<(f64, Vec<f64>)> = locked.iter().map(|(l, x, _)| (*l, x.clone())).collect();
    let mut xs: Vec<Vec<f64>> = locked.into_iter().map(|p| p.1).collect();
    let mut out = fallback.clone();
    for _ in 0..2 {
        let ys: Vec<Vec<f64>> = xs.iter().map(|x| op.apply(x)).collect();
        stats.iterations += ys.len();
        let Some(next) = rayleigh_ritz(op.a, op.m, &ys) else { return fallback };
        xs = next.iter().map(|p| p.1.clone()).collect();
        out = next;
    }
    out
}

fn rayleigh_ritz(a: &SparseMat, m: &SparseMat, ys: &[Vec<f64>]) -> Option<Vec<(f64, Vec<f64>)>> {
    let p = ys.len();
    let ay: Vec<Vec<f64>> = ys.iter().map(|y| a.mul_vec(y)).collect();
    let my: Vec<Vec<f64>> = ys.iter().map(|y| m.mul_vec(y)).collect();
    let mut ap = DMatrix::from_fn(p, p, |i, j| dot(&ys[i], &ay[j]));
    let mut mp = DMatrix::from_fn(p, p, |i, j| dot(&ys[i], &my[j]));
    ap = (&ap + ap.transpose()) * 0.5;
    mp = (&mp + mp.transpose()) * 0.5;
    let chol = mp.cholesky()?;
    let linv = chol.l().try_inverse()?;
    let c = &linv * ap * linv.transpose();
    let eig = SymmetricEigen::new((&c + c.transpose()) * 0.5);
    let coeffs = linv.transpose() * &eig.eigenvectors;
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..p)
        .map(|k| {
            let mut x = vec![0.0; ys[0].len()];
            for (i, y) in ys.iter().enumerate() {
                axpy(coeffs[(i, k)], y, &mut x);
            }
            (eig.eigenvalues[k], x)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Some(pairs)
}

fn kth_smallest(locked: &[(f64, Vec<f64>, Vec<f64>)], k: usize) -> Option<f64> {
    if locked.len() < k {
        return None;
    }
    let mut v: Vec<f64> = locked.iter().map(|p| p.0).collect();
    v.sort_by(f64::total_cmp);
    Some(v[k - 1])
}

/// Removes the M-components of `w` along locked vectors and (optionally) the current basis.
fn deflate(
    w: &mut [f64],
    mw: &mut [f64],
    locked: &[(f64, Vec<f64>, Vec<f64>)],
    basis: Option<(&[Vec<f64>], &[Vec<f64>])>,
) {
    for (_, q, mq) in locked {
        let c = dot(w, mq);
        for i in 0..w.len() {
            w[i] -= c * q[i];
            mw[i] -= c * mq[i];
        }
    }
    if let Some((qs, mqs)) = basis {
        for (q, mq) in qs.iter().zip(mqs) {
            let c = dot(w, mq);
            for i in 0..w.len() {
                w[i] -= c * q[i];
                mw[i] -= c * mq[i];
            }
        }
    }
}

fn tridiag_eig(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil() {
        let a = SparseMat::from_diagonal(&[1.0, 2.0, 3.0]);
        let m = SparseMat::identity(3);
        let r = gen_eig_smallest(&a, &m, 1, 0.0, 1e-10).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-12);
        let x = &r.eigenvectors[0];
        assert!((x[0].abs() - 1.0).abs() < 1e-10 && x[1].abs() < 1e-10 && x[2].abs() < 1e-10);
    }

    #[test]
    fn scaled_mass_pencil() {
        let a = SparseMat::from_diagonal(&[4.0, 2.0]);
        let m = SparseMat::from_diagonal(&[2.0, 1.0]);
        let r = gen_eig_smallest(&a, &m, 2, 0.0, 1e-10).unwrap();
        assert_eq!(r.eigenvalues.len(), 2);
        for l in &r.eigenvalues {
            assert!((l - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_dirichlet_laplacian() {
        // P1 stiffness/mass on [0,1] with n = 64 elements, interior nodes only.
        let n = 64usize;
        let h = 1.0 / n as f64;
        let dofs = n - 1;
        let mut ka = Vec::new();
        let mut km = Vec::new();
        for i in 0..dofs {
            ka.push((i, i, 2.0 / h));
            km.push((i, i, 4.0 * h / 6.0));
            if i + 1 < dofs {
                for (r, c) in [(i, i + 1), (i + 1, i)] {
                    ka.push((r, c, -1.0 / h));
                    km.push((r, c, h / 6.0));
                }
            }
        }
        let a = SparseMat::from_triplets(dofs, dofs, ka).unwrap();
        let m = SparseMat::from_triplets(dofs, dofs, km).unwrap();
        let r = gen_eig_smallest(&a, &m, 3, 0.0, 1e-10).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(((r.eigenvalues[0] - pi2) / pi2).abs() < 5e-3);
        assert!(r.solver_stats.converged);
        assert!(r.solver_stats.residual_norms.iter().all(|&x| x < 1e-9));
    }
}
