//! Sparse `L D L^T` factorization (up-looking, simplicial) under an
//! approximate-minimum-degree ordering.
//!
//! Symmetric quasi-definite systems (saddle-point pencils with a zero
//! multiplier block) are handled with signed dynamic regularization: a pivot
//! whose sign disagrees with the expected one, or whose magnitude falls below
//! `delta`, is replaced by `sign * delta`. Solves against a regularized factor
//! are followed by iterative refinement on the original matrix.

use crate::error::{Error, Result};
use crate::linalg::sparse::{norm2, SparseMat};

#[derive(Debug, Clone)]
pub struct LdlOptions {
    /// Expected pivot sign per original row (`+1`/`-1`). `None` means plain
    /// factorization: a zero pivot is an error.
    pub signs: Option<Vec<i8>>,
    /// Relative regularization threshold (scaled by the largest diagonal entry).
    pub delta: f64,
    /// Relative pivot threshold below which a non-regularized factorization fails.
    pub pivot_tol: f64,
}

impl Default for LdlOptions {
    fn default() -> Self {
        Self {
            signs: None,
            delta: 1e-10,
            pivot_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LdlFactor {
    n: usize,
    /// perm[new] = old
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
    d: Vec<f64>,
    regularized: usize,
}

fn amd_order(a: &SparseMat) -> Vec<usize> {
    let n = a.n_rows;
    if n == 0 {
        return Vec::new();
    }
    // The pattern of a symmetric CSR matrix is its own CSC pattern.
    let control = amd::Control::default();
    match amd::order::<usize>(n, &a.row_offsets, &a.col_indices, &control) {
        Ok((p, _, _)) => p,
        Err(_) => (0..n).collect(),
    }
}

impl LdlFactor {
    pub fn new(a: &SparseMat) -> Result<Self> {
        Self::with_options(a, &LdlOptions::default())
    }

    pub fn with_options(a: &SparseMat, opts: &LdlOptions) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LDL^T needs a square matrix, got {}x{}",
                a.n_rows, a.n_cols
            )));
        }
        if let Some(s) = &opts.signs {
            if s.len() != a.n_rows {
                return Err(Error::DimensionMismatch("pivot sign vector length".into()));
            }
        }
        let perm = amd_order(a);
        Self::with_permutation(a, perm, opts)
    }

    pub fn with_permutation(a: &SparseMat, perm: Vec<usize>, opts: &LdlOptions) -> Result<Self> {
        let n = a.n_rows;
        let mut pinv = vec![0usize; n];
        for (k, &p) in perm.iter().enumerate() {
            pinv[p] = k;
        }
        let ap = &a.row_offsets;
        let ai = &a.col_indices;
        let ax = &a.values;

        // Symbolic: elimination tree and column counts.
        const NONE: usize = usize::MAX;
        let mut parent = vec![NONE; n];
        let mut flag = vec![0usize; n];
        let mut lnz = vec![0usize; n];
        for k in 0..n {
            parent[k] = NONE;
            flag[k] = k;
            lnz[k] = 0;
            let kk = perm[k];
            for p in ap[kk]..ap[kk + 1] {
                let mut i = pinv[ai[p]];
                if i < k {
                    while flag[i] != k {
                        if parent[i] == NONE {
                            parent[i] = k;
                        }
                        lnz[i] += 1;
                        flag[i] = k;
                        i = parent[i];
                    }
                }
            }
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + lnz[k];
        }

        // Numeric.
        let total = lp[n];
        let mut li = vec![0usize; total];
        let mut lx = vec![0.0f64; total];
        let mut d = vec![0.0f64; n];
        let mut y = vec![0.0f64; n];
        let mut pattern = vec![0usize; n];
        let scale = a
            .diagonal()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(a.max_abs() * 1e-3)
            .max(f64::MIN_POSITIVE);
        let delta = opts.delta * scale;
        let mut regularized = 0;
        for k in 0..n {
            y[k] = 0.0;
            let mut top = n;
            flag[k] = k;
            lnz[k] = 0;
            let kk = perm[k];
            for p in ap[kk]..ap[kk + 1] {
                let mut i = pinv[ai[p]];
                if i <= k {
                    y[i] += ax[p];
                    let mut len = 0;
                    while flag[i] != k {
                        pattern[len] = i;
                        len += 1;
                        flag[i] = k;
                        i = parent[i];
                    }
                    while len > 0 {
                        top -= 1;
                        len -= 1;
                        pattern[top] = pattern[len];
                    }
                }
            }
            let mut dk = y[k];
            y[k] = 0.0;
            while top < n {
                let i = pattern[top];
                let yi = y[i];
                y[i] = 0.0;
                let p2 = lp[i] + lnz[i];
                for p in lp[i]..p2 {
                    y[li[p]] -= lx[p] * yi;
                }
                let l_ki = yi / d[i];
                dk -= l_ki * yi;
                li[p2] = k;
                lx[p2] = l_ki;
                lnz[i] += 1;
                top += 1;
            }
            match &opts.signs {
                Some(signs) => {
                    let s = f64::from(signs[kk]);
                    if s * dk < delta {
                        dk = s * delta;
                        regularized += 1;
                    }
                }
                None => {
                    if !(dk.abs() > opts.pivot_tol * scale) {
                        return Err(Error::SingularPivot {
                            index: kk,
                            value: dk,
                        });
                    }
                }
            }
            d[k] = dk;
        }
        Ok(Self {
            n,
            perm,
            lp,
            li,
            lx,
            d,
            regularized,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of pivots replaced by the signed regularization.
    pub fn regularized_pivots(&self) -> usize {
        self.regularized
    }

    pub fn nnz_l(&self) -> usize {
        self.lp[self.n]
    }

    /// Inertia of `D`: (positive, negative) pivot counts.
    pub fn inertia(&self) -> (usize, usize) {
        let pos = self.d.iter().filter(|&&v| v > 0.0).count();
        (pos, self.n - pos)
    }

    /// Solve with the computed factors only.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..n {
            let xj = x[j];
            for p in self.lp[j]..self.lp[j + 1] {
                x[self.li[p]] -= self.lx[p] * xj;
            }
        }
        for j in 0..n {
            x[j] /= self.d[j];
        }
        for j in (0..n).rev() {
            let mut s = x[j];
            for p in self.lp[j]..self.lp[j + 1] {
                s -= self.lx[p] * x[self.li[p]];
            }
            x[j] = s;
        }
        let mut out = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = x[k];
        }
        out
    }

    /// Solve followed by iterative refinement against `a` (the unregularized matrix).
    pub fn solve_refined(&self, a: &SparseMat, b: &[f64]) -> Vec<f64> {
        let mut x = self.solve(b);
        let bnorm = norm2(b);
        if bnorm == 0.0 {
            return x;
        }
        let mut r = vec![0.0; self.n];
        let mut prev = f64::INFINITY;
        for _ in 0..30 {
            a.mul_vec_into(&x, &mut r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri = bi - *ri;
            }
            let rn = norm2(&r);
            if rn <= 1e-14 * bnorm || rn >= 0.5 * prev {
                break;
            }
            prev = rn;
            let dx = self.solve(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x
    }
}

/// Factor `a` and solve `a x = b` with iterative refinement.
pub fn factor_solve(a: &SparseMat, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.n_rows {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} for {}x{} matrix",
            b.len(),
            a.n_rows,
            a.n_cols
        )));
    }
    let f = LdlFactor::new(a)?;
    Ok(f.solve_refined(a, b))
}
