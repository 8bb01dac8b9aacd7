//! Continuous P1 and P2 Lagrange elements.

use crate::geometry::edges::{local_edges, EdgeTopology};
use crate::geometry::quadrature::quad_rule;
use crate::geometry::{SimplicialMesh, Vec3};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// P1 stiffness and mass of cell `c` as row-major `(d+1)²` blocks.
pub fn p1_local(mesh: &SimplicialMesh, c: usize) -> (Vec<f64>, Vec<f64>) {
    let d = mesh.dim;
    let n = d + 1;
    let vol = mesh.cell_volume(c);
    let g = mesh.bary_gradients(c);
    let mut k = vec![0.0; n * n];
    let mut m = vec![0.0; n * n];
    let denom = ((d + 1) * (d + 2)) as f64;
    for i in 0..n {
        for j in 0..n {
            k[i * n + j] = vol * g[i].dot(&g[j]);
            m[i * n + j] = vol * if i == j { 2.0 } else { 1.0 } / denom;
        }
    }
    (k, m)
}

/// P2 basis values: vertex functions `λ_i(2λ_i - 1)` then edge functions `4λ_aλ_b`.
pub fn p2_values(dim: usize, bary: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = bary[..=dim].iter().map(|l| l * (2.0 * l - 1.0)).collect();
    v.extend(local_edges(dim).iter().map(|&(a, b)| 4.0 * bary[a] * bary[b]));
    v
}

pub fn p2_gradients(dim: usize, bary: &[f64], g: &[Vec3]) -> Vec<Vec3> {
    let mut v: Vec<Vec3> = (0..=dim).map(|i| g[i] * (4.0 * bary[i] - 1.0)).collect();
    v.extend(local_edges(dim).iter().map(|&(a, b)| (g[b] * bary[a] + g[a] * bary[b]) * 4.0));
    v
}

/// Global P2 dofs of cell `c`: vertices first, then `n_vertices + edge`.
pub fn p2_cell_dofs(mesh: &SimplicialMesh, topo: &EdgeTopology, c: usize) -> Vec<usize> {
    let nv = mesh.n_vertices();
    let mut d: Vec<usize> = mesh.cell(c).to_vec();
    d.extend(topo.of_cell(c).iter().map(|e| nv + e));
    d
}

/// Boundary mask of the P2 dofs.
pub fn p2_boundary(mesh: &SimplicialMesh, topo: &EdgeTopology) -> Vec<bool> {
    let mut b = mesh.boundary_vertices();
    b.extend(topo.boundary.iter().copied());
    b
}

/// P2 stiffness `∫∇φ_i·∇φ_j` and mass `∫φ_iφ_j` of cell `c`.
pub fn p2_local(mesh: &SimplicialMesh, c: usize) -> (Vec<f64>, Vec<f64>) {
    let d = mesh.dim;
    let q = quad_rule(d, 4).expect("order-4 rule");
    let g = mesh.bary_gradients(c);
    let vol = mesh.cell_volume(c) * factorial(d);
    let n = if d == 2 { 6 } else { 10 };
    let mut k = vec![0.0; n * n];
    let mut m = vec![0.0; n * n];
    for (b, w) in q.points.iter().zip(&q.weights) {
        let phi = p2_values(d, b);
        let gp = p2_gradients(d, b, &g);
        let w = w * vol;
        for i in 0..n {
            for j in 0..n {
                k[i * n + j] += w * gp[i].dot(&gp[j]);
                m[i * n + j] += w * phi[i] * phi[j];
            }
        }
    }
    (k, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_mesh, DomainSpec};

    #[test]
    fn p2_partition_of_unity() {
        for d in [2, 3] {
            let b: Vec<f64> = if d == 2 { vec![0.2, 0.3, 0.5] } else { vec![0.1, 0.2, 0.3, 0.4] };
            let s: f64 = p2_values(d, &b).iter().sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn p2_mass_sums_to_volume() {
        let m = generate_mesh(&DomainSpec::Cube, 1).unwrap();
        let (k, mass) = p2_local(&m, 0);
        let total: f64 = mass.iter().sum();
        assert!((total - m.cell_volume(0)).abs() < 1e-15);
        // Constants are in the kernel of the stiffness matrix.
        for i in 0..10 {
            let row: f64 = k[i * 10..(i + 1) * 10].iter().sum();
            assert!(row.abs() < 1e-12);
        }
    }
}
