use beltrami_lab::geometry::{
    generate_mesh, integrate_boundary, mesh_to_string, parse_mesh, star_kernel, DomainSpec, Vec3,
    DEFAULT_STAR_TOL,
};
use beltrami_lab::linalg::lp_max_margin;
use beltrami_lab::geometry::star::star_problem;
use proptest::prelude::*;

fn fixtures() -> Vec<(DomainSpec, usize)> {
    vec![
        (DomainSpec::Square, 4),
        (DomainSpec::Disk, 8),
        (DomainSpec::LShape, 3),
        (DomainSpec::Annulus { r0: 1.0, r1: 2.0 }, 4),
        (DomainSpec::Cube, 3),
        (DomainSpec::Ball, 4),
        (DomainSpec::Shell { r0: 1.0, r1: 2.0 }, 2),
    ]
}

/// Best worst-facet margin over a grid of candidate centers in the bounding box.
fn grid_search(m: &beltrami_lab::geometry::SimplicialMesh, res: usize) -> (f64, f64) {
    let p = star_problem(m);
    let mut lo = m.vertices[0];
    let mut hi = m.vertices[0];
    for v in &m.vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    let h = (hi - lo).max() / res as f64;
    let mut best = f64::NEG_INFINITY;
    let kz = if m.dim == 3 { res } else { 0 };
    for k in 0..=kz {
        for j in 0..=res {
            for i in 0..=res {
                let x = lo + Vec3::new(i as f64, j as f64, k as f64) * h;
                best = best.max(p.margin_at(&x.as_slice()[..m.dim]));
            }
        }
    }
    (best, h * (m.dim as f64).sqrt())
}

#[test]
fn mesh_invariants_on_fixtures() {
    for (d, n) in fixtures() {
        let m = generate_mesh(&d, n).unwrap();
        assert!(m.normal_balance().norm() <= 1e-10, "{d}");
        for f in 0..m.n_boundary_facets() {
            assert!((m.facet_normals[f].norm() - 1.0).abs() < 1e-12);
            let out = m.facet_centroid(f) - m.cell_centroid(m.facet_cells[f]);
            assert!(m.facet_normals[f].dot(&out) > 0.0);
        }
        // Divergence theorem on the polygonal domain: ∮ x·ν = d |D|.
        let flux = integrate_boundary(&m, |x, nu| x.dot(nu), 1).unwrap();
        assert!((flux - m.dim as f64 * m.total_volume()).abs() < 1e-12 * flux.abs().max(1.0));
    }
}

#[test]
fn star_kernel_agrees_with_grid_oracle() {
    for (d, n) in fixtures() {
        let m = generate_mesh(&d, n).unwrap();
        let (best, res) = grid_search(&m, if m.dim == 2 { 200 } else { 40 });
        let found = star_kernel(&m, DEFAULT_STAR_TOL);
        let star = !d.origin_excluded();
        assert_eq!(found.is_some(), star, "{d}");
        assert_eq!(best >= -res, star, "{d}: grid best {best}");
        if let Some((c, t)) = found {
            let p = star_problem(&m);
            assert!(p.margin_at(&c.as_slice()[..m.dim]) >= t - 1e-12);
            assert!(t >= best - 1e-12 && t <= best + res, "{d}: lp {t} grid {best}");
        } else {
            assert!(best < 0.0);
        }
    }
}

#[test]
fn lshape_kernel_lies_in_unit_square() {
    let m = generate_mesh(&DomainSpec::LShape, 4).unwrap();
    let (c, t) = star_kernel(&m, DEFAULT_STAR_TOL).unwrap();
    assert!(t >= 0.0);
    assert!(c.x <= 1.0 + 1e-12 && c.y <= 1.0 + 1e-12);
    assert!(lp_max_margin(&star_problem(&m), DEFAULT_STAR_TOL).unwrap().is_some());
}

#[test]
fn volumes_match_polytope_and_converge() {
    for d in [DomainSpec::Square, DomainSpec::Cube, DomainSpec::LShape] {
        let m = generate_mesh(&d, 4).unwrap();
        assert!((m.total_volume() - d.exact_volume()).abs() < 1e-12);
    }
    for d in [DomainSpec::Ball, DomainSpec::Shell { r0: 1.0, r1: 2.0 }] {
        let e1 = (generate_mesh(&d, 4).unwrap().total_volume() - d.exact_volume()).abs();
        let e2 = (generate_mesh(&d, 8).unwrap().total_volume() - d.exact_volume()).abs();
        assert!(e2 < e1 / 3.0, "{d}: {e1} {e2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_is_bit_exact(which in 0usize..7, n in 2usize..5) {
        let (d, _) = fixtures()[which];
        let m = generate_mesh(&d, n).unwrap();
        let text = mesh_to_string(&m);
        let back = parse_mesh(&text).unwrap();
        prop_assert_eq!(&m, &back);
        prop_assert_eq!(text, mesh_to_string(&back));
    }

    #[test]
    fn translation_preserves_margin(dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let m = generate_mesh(&DomainSpec::Disk, 6).unwrap();
        let shift = Vec3::new(dx, dy, 0.0);
        let moved = m.translated(&(-shift));
        let (_, t0) = star_kernel(&m, DEFAULT_STAR_TOL).unwrap();
        let (c1, t1) = star_kernel(&moved, DEFAULT_STAR_TOL).unwrap();
        prop_assert!((t0 - t1).abs() < 1e-9);
        prop_assert!(beltrami_lab::geometry::min_support(&moved, &c1) >= -DEFAULT_STAR_TOL);
    }
}
