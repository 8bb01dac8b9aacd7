//! The Beltrami defect `J(u) = ∫ |curl u × u|² + |div u|²` for P1 vector
//! fields, with cellwise-constant curl and divergence, and its gradient.

use crate::geometry::{SimplicialMesh, Vec3};

pub struct DefectOperator {
    cells: Vec<([usize; 4], [Vec3; 4], f64)>,
    n_vertices: usize,
}

impl DefectOperator {
    pub fn new(mesh: &SimplicialMesh) -> Self {
        let cells = (0..mesh.n_cells())
            .map(|c| {
                let cv = mesh.cell(c);
                let g = mesh.bary_gradients(c);
                ([cv[0], cv[1], cv[2], cv[3]], [g[0], g[1], g[2], g[3]], mesh.cell_volume(c))
            })
            .collect();
        Self { cells, n_vertices: mesh.n_vertices() }
    }

    fn cell_terms(&self, u: &[Vec3], c: usize) -> (Vec3, f64, [Vec3; 4], Vec3) {
        let (cv, g, _) = &self.cells[c];
        let us = cv.map(|v| u[v]);
        let curl = (0..4).fold(Vec3::zeros(), |s, i| s + g[i].cross(&us[i]));
        let div: f64 = (0..4).map(|i| g[i].dot(&us[i])).sum();
        let sum = us.iter().fold(Vec3::zeros(), |s, v| s + v);
        (curl, div, us, sum)
    }

    /// `(cross part, divergence part)` of the defect.
    pub fn parts(&self, u: &[Vec3]) -> (f64, f64) {
        let (mut cross, mut divp) = (0.0, 0.0);
        for c in 0..self.cells.len() {
            let vol = self.cells[c].2;
            let (a, d, us, sum) = self.cell_terms(u, c);
            // ∫ uuᵀ = vol/20 (Σ U_i U_iᵀ + (ΣU)(ΣU)ᵀ), exact for linear u.
            let a2 = a.norm_squared();
            let mut t = a2 * sum.norm_squared() - a.dot(&sum).powi(2);
            for ui in &us {
                t += a2 * ui.norm_squared() - a.dot(ui).powi(2);
            }
            cross += vol / 20.0 * t;
            divp += vol * d * d;
        }
        (cross, divp)
    }

    pub fn value(&self, u: &[Vec3]) -> f64 {
        let (a, b) = self.parts(u);
        a + b
    }

    /// Value and gradient with respect to the nodal vectors.
    pub fn value_grad(&self, u: &[Vec3]) -> (f64, Vec<Vec3>) {
        let mut grad = vec![Vec3::zeros(); self.n_vertices];
        let mut j = 0.0;
        for c in 0..self.cells.len() {
            let (cv, g, vol) = &self.cells[c];
            let (a, d, us, sum) = self.cell_terms(u, c);
            let a2 = a.norm_squared();
            let mut s = sum * sum.transpose();
            for ui in &us {
                s += ui * ui.transpose();
            }
            s *= vol / 20.0;
            let tr = s.trace();
            j += tr * a2 - a.dot(&(s * a)) + vol * d * d;
            let w = 2.0 * (tr * a - s * a);
            for k in 0..4 {
                let y = us[k] + sum;
                let direct = (a2 * y - a * a.dot(&y)) * (vol / 10.0);
                grad[cv[k]] += direct + w.cross(&g[k]) + g[k] * (2.0 * vol * d);
            }
        }
        (j, grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_mesh, DomainSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_matches_central_differences() {
        let m = generate_mesh(&DomainSpec::Cube, 2).unwrap();
        let op = DefectOperator::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u: Vec<Vec3> = (0..m.n_vertices())
            .map(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let (j, g) = op.value_grad(&u);
        assert!((j - op.value(&u)).abs() <= 1e-12 * j);
        let h = 1e-6;
        for v in [0, 5, 13, 26] {
            for k in 0..3 {
                let mut up = u.clone();
                let mut dn = u.clone();
                up[v][k] += h;
                dn[v][k] -= h;
                let fd = (op.value(&up) - op.value(&dn)) / (2.0 * h);
                assert!((fd - g[v][k]).abs() <= 1e-6 * (1.0 + fd.abs()), "v{v} k{k}: {fd} vs {}", g[v][k]);
            }
        }
    }

    #[test]
    fn constant_field_has_zero_defect() {
        let m = generate_mesh(&DomainSpec::Cube, 2).unwrap();
        let op = DefectOperator::new(&m);
        let c: Vec<Vec3> = m.vertices.iter().map(|_| Vec3::new(0.3, -1.0, 2.0)).collect();
        assert!(op.value(&c) < 1e-24);
        // u = (0, 0, x): curl u = (0, -1, 0) is not parallel to u.
        let lin: Vec<Vec3> = m.vertices.iter().map(|p| Vec3::new(0.0, 0.0, p.x)).collect();
        assert!(op.parts(&lin).0 > 1e-3);
    }
}
