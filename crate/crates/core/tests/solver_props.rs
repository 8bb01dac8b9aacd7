use beltrami_lab::cli::{ResultEntry, RunReport};
use beltrami_lab::linalg::{assemble_csr, gen_eig_smallest, SparseMat};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

/// Strictly diagonally dominant symmetric matrix from an off-diagonal pattern.
fn spd(n: usize, off: &[(usize, usize, f64)], diag: &[f64]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for &(i, j, v) in off {
        let (i, j) = (i % n, j % n);
        if i != j {
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    for i in 0..n {
        let row: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = row + diag[i % diag.len()];
    }
    a
}

fn sparse(a: &DMatrix<f64>) -> SparseMat {
    let mut t = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)] != 0.0 {
                t.push((i, j, a[(i, j)]));
            }
        }
    }
    assemble_csr(&t).unwrap()
}

/// Dense generalized eigenvalues through the Cholesky factor of `m`.
fn dense(a: &DMatrix<f64>, m: &DMatrix<f64>) -> Vec<f64> {
    let l = m.clone().cholesky().unwrap().l();
    let li = l.try_inverse().unwrap();
    let c = &li * a * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn pencil() -> impl Strategy<Value = (DMatrix<f64>, DMatrix<f64>)> {
    (2usize..=50).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, -1.0f64..1.0), 0..3 * n),
            prop::collection::vec(0.05f64..3.0, 1..8),
            prop::collection::vec((0..n, 0..n, -0.2f64..0.2), 0..n),
            prop::collection::vec(0.5f64..2.0, 1..4),
        )
            .prop_map(|(n, ao, ad, mo, md)| (spd(n, &ao, &ad), spd(n, &mo, &md)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lanczos_matches_dense((a, m) in pencil()) {
        let k = a.nrows().min(5);
        let got = gen_eig_smallest(&sparse(&a), &sparse(&m), k, 0.0, 1e-12).unwrap();
        let want = dense(&a, &m);
        prop_assert_eq!(got.eigenvalues.len(), k);
        for (g, w) in got.eigenvalues.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-8 * w.abs().max(1.0), "{} vs {}", g, w);
        }
        for r in &got.solver_stats.residual_norms {
            prop_assert!(*r <= 1e-8);
        }
    }

    #[test]
    fn spectrum_is_permutation_invariant((a, m) in pencil(), seed in any::<u64>()) {
        let n = a.nrows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed | 1;
        for i in (1..n).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let p = |x: &DMatrix<f64>| DMatrix::from_fn(n, n, |i, j| x[(perm[i], perm[j])]);
        let k = n.min(4);
        let e0 = gen_eig_smallest(&sparse(&a), &sparse(&m), k, 0.0, 1e-12).unwrap().eigenvalues;
        let e1 = gen_eig_smallest(&sparse(&p(&a)), &sparse(&p(&m)), k, 0.0, 1e-12).unwrap().eigenvalues;
        for (x, y) in e0.iter().zip(&e1) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn report_json_round_trips(
        entries in prop::collection::vec(("[a-z_\\[\\]0-9.]{1,16}", -1e6f64..1e6, prop::option::of(-1e3f64..1e3), prop::option::of(1e-14f64..1.0), any::<bool>()), 0..12),
        notes in prop::collection::vec("[ -~]{0,30}", 0..3),
    ) {
        let mut r = RunReport::new("eig --problem maxwell".into());
        for (name, value, oracle, tol, pass) in entries {
            let mut e = ResultEntry::info(name, value);
            e.oracle = oracle;
            e.provenance = oracle.map(|_| "closed form".to_string());
            e.tolerance = tol;
            e.pass = pass;
            r.push(e);
        }
        r.notes = notes;
        r.timing_ms = 12.5;
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
