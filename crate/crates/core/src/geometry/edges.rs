//! Global edge numbering for edge and quadratic elements.

use std::collections::HashMap;

use crate::geometry::mesh::SimplicialMesh;

/// Local vertex pairs of the edges of a triangle or tetrahedron.
pub fn local_edges(dim: usize) -> &'static [(usize, usize)] {
    if dim == 2 {
        &[(0, 1), (0, 2), (1, 2)]
    } else {
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    }
}

#[derive(Debug, Clone)]
pub struct EdgeTopology {
    /// Global edges as `(lo, hi)` vertex pairs, oriented by ascending index.
    pub edges: Vec<(usize, usize)>,
    /// Per cell, the global edge of each local edge (stride 3 or 6).
    pub cell_edges: Vec<usize>,
    /// Edges lying on a boundary facet.
    pub boundary: Vec<bool>,
    stride: usize,
}

impl EdgeTopology {
    pub fn new(mesh: &SimplicialMesh) -> Self {
        let le = local_edges(mesh.dim);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut cell_edges = Vec::with_capacity(mesh.n_cells() * le.len());
        for c in 0..mesh.n_cells() {
            let cv = mesh.cell(c);
            for &(a, b) in le {
                let key = (cv[a].min(cv[b]), cv[a].max(cv[b]));
                let id = *index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
                cell_edges.push(id);
            }
        }
        let mut boundary = vec![false; edges.len()];
        for f in 0..mesh.n_boundary_facets() {
            let fv = mesh.facet(f);
            for i in 0..fv.len() {
                for j in i + 1..fv.len() {
                    let key = (fv[i].min(fv[j]), fv[i].max(fv[j]));
                    boundary[index[&key]] = true;
                }
            }
        }
        Self { edges, cell_edges, boundary, stride: le.len() }
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn of_cell(&self, c: usize) -> &[usize] {
        &self.cell_edges[c * self.stride..(c + 1) * self.stride]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generate::{generate_mesh, DomainSpec};

    #[test]
    fn euler_characteristic() {
        // V - E + F - T = 1 for a ball-like tetrahedral mesh.
        let m = generate_mesh(&DomainSpec::Cube, 3).unwrap();
        let e = EdgeTopology::new(&m);
        let nb = m.n_boundary_facets();
        let faces = (4 * m.n_cells() + nb) / 2;
        let chi = m.n_vertices() as i64 - e.n_edges() as i64 + faces as i64 - m.n_cells() as i64;
        assert_eq!(chi, 1);
        // boundary surface: V_b - E_b + F_b = 2
        let vb = m.boundary_vertices().iter().filter(|&&b| b).count() as i64;
        let eb = e.boundary.iter().filter(|&&b| b).count() as i64;
        assert_eq!(vb - eb + nb as i64, 2);
    }
}
