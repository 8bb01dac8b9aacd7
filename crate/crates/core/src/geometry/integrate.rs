//! Volume and boundary integration over simplicial meshes.
//!
//! The visitors hand each quadrature point to a callback together with the
//! owning cell and its barycentric coordinates, so finite element fields can
//! be evaluated with the same points as analytic ones. Accumulation runs in
//! cell order and is therefore deterministic.

use crate::error::Result;
use crate::geometry::mesh::SimplicialMesh;
use crate::geometry::quadrature::quad_rule;
use crate::geometry::Vec3;

#[derive(Debug, Clone)]
pub struct CellPoint {
    pub cell: usize,
    pub bary: Vec<f64>,
    pub x: Vec3,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct FacetPoint {
    pub facet: usize,
    pub cell: usize,
    /// Barycentric coordinates with respect to the owning cell.
    pub bary: Vec<f64>,
    pub x: Vec3,
    pub normal: Vec3,
    pub weight: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn for_each_cell_point<F>(mesh: &SimplicialMesh, order: usize, mut f: F) -> Result<()>
where
    F: FnMut(&CellPoint) -> Result<()>,
{
    let q = quad_rule(mesh.dim, order)?;
    let scale = factorial(mesh.dim);
    for c in 0..mesh.n_cells() {
        let p = mesh.cell_points(c);
        let vol = mesh.cell_volume(c) * scale;
        for (b, w) in q.points.iter().zip(&q.weights) {
            let x = b.iter().zip(&p).fold(Vec3::zeros(), |s, (bi, pi)| s + pi * *bi);
            f(&CellPoint { cell: c, bary: b.clone(), x, weight: w * vol })?;
        }
    }
    Ok(())
}

/// Local indices in the owning cell of each vertex of facet `f`.
fn facet_slots(mesh: &SimplicialMesh, f: usize) -> Vec<usize> {
    let cv = mesh.cell(mesh.facet_cells[f]);
    mesh.facet(f)
        .iter()
        .map(|v| cv.iter().position(|w| w == v).expect("facet vertex in owning cell"))
        .collect()
}

fn visit_facets<F>(mesh: &SimplicialMesh, order: usize, sphere: Option<f64>, mut f: F) -> Result<()>
where
    F: FnMut(&FacetPoint) -> Result<()>,
{
    let fd = mesh.dim - 1;
    let q = quad_rule(fd, order)?;
    let scale = factorial(fd);
    for fi in 0..mesh.n_boundary_facets() {
        let p = mesh.facet_points(fi);
        if let Some(r) = sphere {
            if p.iter().any(|v| (v.norm() - r).abs() > 1e-9 * r) {
                continue;
            }
        }
        let slots = facet_slots(mesh, fi);
        let area = mesh.facet_measures[fi] * scale;
        let nf = mesh.facet_normals[fi];
        for (b, w) in q.points.iter().zip(&q.weights) {
            let x = b.iter().zip(&p).fold(Vec3::zeros(), |s, (bi, pi)| s + pi * *bi);
            let mut bary = vec![0.0; mesh.dim + 1];
            for (k, &s) in slots.iter().enumerate() {
                bary[s] = b[k];
            }
            let pt = match sphere {
                None => FacetPoint { facet: fi, cell: mesh.facet_cells[fi], bary, x, normal: nf, weight: w * area },
                Some(r) => {
                    // Radial projection; dS = r^{d-1} |x·n| / |x|^d dA.
                    let rx = x.norm();
                    let y = x * (r / rx);
                    let jac = r.powi(fd as i32) * x.dot(&nf).abs() / rx.powi(mesh.dim as i32);
                    FacetPoint { facet: fi, cell: mesh.facet_cells[fi], bary, x: y, normal: y / r, weight: w * area * jac }
                }
            };
            f(&pt)?;
        }
    }
    Ok(())
}

pub fn for_each_facet_point<F>(mesh: &SimplicialMesh, order: usize, f: F) -> Result<()>
where
    F: FnMut(&FacetPoint) -> Result<()>,
{
    visit_facets(mesh, order, None, f)
}

/// Visits the facets lying on the sphere (circle) of radius `r` about the
/// origin, with quadrature points projected onto the exact surface and the
/// exact radial normal. Cell barycentrics refer to the unprojected point.
pub fn for_each_sphere_point<F>(mesh: &SimplicialMesh, r: f64, order: usize, f: F) -> Result<()>
where
    F: FnMut(&FacetPoint) -> Result<()>,
{
    visit_facets(mesh, order, Some(r), f)
}

/// `∫_D f dx` with a rule exact for polynomials of degree `order` per cell.
pub fn integrate_volume<F>(mesh: &SimplicialMesh, f: F, order: usize) -> Result<f64>
where
    F: Fn(&Vec3) -> f64,
{
    let mut s = 0.0;
    for_each_cell_point(mesh, order, |p| {
        s += p.weight * f(&p.x);
        Ok(())
    })?;
    Ok(s)
}

/// `∮_{∂D} g(x, ν) dS` over the boundary facets.
pub fn integrate_boundary<F>(mesh: &SimplicialMesh, g: F, order: usize) -> Result<f64>
where
    F: Fn(&Vec3, &Vec3) -> f64,
{
    let mut s = 0.0;
    for_each_facet_point(mesh, order, |p| {
        s += p.weight * g(&p.x, &p.normal);
        Ok(())
    })?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generate::{generate_mesh, DomainSpec};
    use std::f64::consts::PI;

    #[test]
    fn constants_and_linears() {
        let sq = generate_mesh(&DomainSpec::Square, 4).unwrap();
        assert_eq!(integrate_volume(&sq, |_| 1.0, 1).unwrap(), 1.0);
        assert!((integrate_boundary(&sq, |_, _| 1.0, 1).unwrap() - 4.0).abs() < 1e-14);
        let cube = generate_mesh(&DomainSpec::Cube, 3).unwrap();
        assert!((integrate_volume(&cube, |x| x.x, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!((integrate_boundary(&cube, |x, n| x.dot(n), 1).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn disk_second_moment_and_flux() {
        let m = generate_mesh(&DomainSpec::Disk, 32).unwrap();
        let i2 = integrate_volume(&m, |x| x.norm_squared(), 2).unwrap();
        assert!((i2 - PI / 2.0).abs() < 5e-3);
        let flux = integrate_boundary(&m, |x, n| x.dot(n), 1).unwrap();
        assert!((flux - 2.0 * m.total_volume()).abs() < 1e-12);
    }

    #[test]
    fn sphere_projection_recovers_exact_area() {
        let m = generate_mesh(&DomainSpec::Ball, 4).unwrap();
        let mut area = 0.0;
        for_each_sphere_point(&m, 1.0, 6, |p| {
            area += p.weight;
            Ok(())
        })
        .unwrap();
        assert!((area - 4.0 * PI).abs() < 1e-3, "{area}");
    }

    #[test]
    fn facet_barycentrics_reproduce_points() {
        let m = generate_mesh(&DomainSpec::Cube, 2).unwrap();
        for_each_facet_point(&m, 3, |p| {
            let cp = m.cell_points(p.cell);
            let x = p.bary.iter().zip(&cp).fold(Vec3::zeros(), |s, (b, q)| s + q * *b);
            assert!((x - p.x).norm() < 1e-14);
            Ok(())
        })
        .unwrap();
    }
}
