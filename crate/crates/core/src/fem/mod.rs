//! Finite element spaces shared by the 2D and 3D eigenvalue solvers.
//!
//! All element routines are written once for simplices of either dimension,
//! using barycentric gradients stored as 3-vectors.

pub mod lagrange;
pub mod nedelec;
pub mod problems;

use serde::{Deserialize, Serialize};

use crate::geometry::edges::EdgeTopology;
use crate::geometry::SimplicialMesh;
use crate::linalg::sparse::TripletBuilder;

/// Map from full dof numbering to the unknowns left after removing
/// essential (constrained) dofs.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub to_reduced: Vec<Option<usize>>,
    pub n_reduced: usize,
}

impl DofMap {
    pub fn new(essential: &[bool]) -> Self {
        let mut next = 0;
        let to_reduced = essential
            .iter()
            .map(|&e| {
                if e {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect();
        Self { to_reduced, n_reduced: next }
    }

    pub fn n_full(&self) -> usize {
        self.to_reduced.len()
    }

    /// Full-length vector with zeros in the essential slots.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        self.to_reduced.iter().map(|r| r.map_or(0.0, |i| reduced[i])).collect()
    }

    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_reduced];
        for (i, r) in self.to_reduced.iter().enumerate() {
            if let Some(j) = r {
                out[*j] = full[i];
            }
        }
        out
    }
}

/// `V - E + F (- T)` of the triangulation. A connected simply connected
/// domain without cavities has characteristic 1; other values mean the
/// harmonic-field spaces may be nontrivial.
pub fn euler_characteristic(mesh: &SimplicialMesh, topo: &EdgeTopology) -> i64 {
    let v = mesh.n_vertices() as i64;
    let e = topo.n_edges() as i64;
    let c = mesh.n_cells() as i64;
    if mesh.dim == 2 {
        return v - e + c;
    }
    let mut faces = std::collections::HashSet::new();
    for k in 0..mesh.n_cells() {
        let cv = mesh.cell(k);
        for skip in 0..4 {
            let mut f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| cv[i]).collect();
            f.sort_unstable();
            faces.insert((f[0], f[1], f[2]));
        }
    }
    v - e + faces.len() as i64 - c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    P1,
    TaylorHood,
    Edge,
}

/// Dof layout of a discrete space: element kind, full dof count and the
/// essential-boundary mask.
#[derive(Debug, Clone)]
pub struct FemSpace {
    pub kind: ElementKind,
    pub dim: usize,
    pub mesh_id: String,
    pub essential: Vec<bool>,
    pub map: DofMap,
}

impl FemSpace {
    pub fn new(kind: ElementKind, dim: usize, mesh_id: &str, essential: Vec<bool>) -> Self {
        let map = DofMap::new(&essential);
        Self { kind, dim, mesh_id: mesh_id.to_string(), essential, map }
    }

    pub fn n_dofs(&self) -> usize {
        self.essential.len()
    }
}

/// Scatters a dense local block into a builder through two dof maps.
pub(crate) fn scatter(b: &mut TripletBuilder, rows: &[usize], rmap: &DofMap, roff: usize, cols: &[usize], cmap: &DofMap, coff: usize, block: &[f64]) {
    let nc = cols.len();
    for (i, &r) in rows.iter().enumerate() {
        let Some(ri) = rmap.to_reduced[r] else { continue };
        for (j, &c) in cols.iter().enumerate() {
            let Some(cj) = cmap.to_reduced[c] else { continue };
            let v = block[i * nc + j];
            if v != 0.0 {
                b.push(roff + ri, coff + cj, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_map_round_trip() {
        let m = DofMap::new(&[false, true, false, true]);
        assert_eq!(m.n_reduced, 2);
        assert_eq!(m.expand(&[1.0, 2.0]), vec![1.0, 0.0, 2.0, 0.0]);
        assert_eq!(m.restrict(&[1.0, 9.0, 2.0, 9.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn euler_characteristic_detects_holes() {
        use crate::geometry::{generate_mesh, DomainSpec};
        let chi = |s: DomainSpec, n| {
            let m = generate_mesh(&s, n).unwrap();
            euler_characteristic(&m, &EdgeTopology::new(&m))
        };
        assert_eq!(chi(DomainSpec::Square, 3), 1);
        assert_eq!(chi(DomainSpec::Ball, 2), 1);
        assert_eq!(chi(DomainSpec::Annulus { r0: 1.0, r1: 2.0 }, 2), 0);
        assert_eq!(chi(DomainSpec::Shell { r0: 1.0, r1: 2.0 }, 2), 2);
    }
}
