//! Simplicial meshes with boundary facets and outward normals.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// A conforming mesh of triangles (dim 2) or tetrahedra (dim 3).
///
/// Vertices are stored in 3D with `z = 0` for planar meshes. Cells and facets
/// are flat index arrays with stride `dim + 1` and `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMesh {
    pub dim: usize,
    pub vertices: Vec<Vec3>,
    pub cells: Vec<usize>,
    pub boundary_facets: Vec<usize>,
    pub facet_normals: Vec<Vec3>,
    pub facet_measures: Vec<f64>,
    /// Owning cell of each boundary facet.
    pub facet_cells: Vec<usize>,
    /// Local index (opposite vertex) of each boundary facet in its cell.
    pub facet_local: Vec<usize>,
    pub domain_tag: String,
    /// Set for shells and annuli, where the origin lies outside the closure.
    pub origin_excluded: bool,
}

type FaceKey = [usize; 3];

fn face_key(vs: &[usize]) -> FaceKey {
    let mut k = [usize::MAX; 3];
    k[..vs.len()].copy_from_slice(vs);
    k[..vs.len()].sort_unstable();
    k
}

/// Signed measure of a simplex given by its points (2D uses x, y only).
pub fn signed_volume(dim: usize, p: &[Vec3]) -> f64 {
    match dim {
        2 => {
            let a = p[1] - p[0];
            let b = p[2] - p[0];
            0.5 * (a.x * b.y - a.y * b.x)
        }
        _ => {
            let a = p[1] - p[0];
            let b = p[2] - p[0];
            let c = p[3] - p[0];
            a.dot(&b.cross(&c)) / 6.0
        }
    }
}

/// Unit normal (unoriented) and measure of a facet.
pub fn facet_geometry(dim: usize, p: &[Vec3]) -> (Vec3, f64) {
    match dim {
        2 => {
            let t = p[1] - p[0];
            let len = t.norm();
            (Vec3::new(t.y, -t.x, 0.0) / len, len)
        }
        _ => {
            let n = (p[1] - p[0]).cross(&(p[2] - p[0]));
            let a = n.norm();
            (n / a, 0.5 * a)
        }
    }
}

/// Local vertex indices of the face opposite local vertex `k`.
pub fn local_face(dim: usize, k: usize) -> Vec<usize> {
    (0..=dim).filter(|&i| i != k).collect()
}

impl SimplicialMesh {
    /// Builds a mesh and extracts its boundary (faces owned by one cell).
    pub fn from_cells(dim: usize, vertices: Vec<Vec3>, cells: Vec<usize>, tag: &str) -> Result<Self> {
        let nv = dim + 1;
        let mut count: HashMap<FaceKey, (usize, usize, usize)> = HashMap::new();
        for c in 0..cells.len() / nv {
            let cv = &cells[c * nv..(c + 1) * nv];
            for k in 0..nv {
                let f: Vec<usize> = local_face(dim, k).iter().map(|&i| cv[i]).collect();
                count.entry(face_key(&f)).or_insert((0, c, k)).0 += 1;
            }
        }
        let mut owned: Vec<(usize, usize)> = count
            .values()
            .filter(|v| v.0 == 1)
            .map(|v| (v.1, v.2))
            .collect();
        owned.sort_unstable();
        let mut facets = Vec::with_capacity(owned.len() * dim);
        for (c, k) in owned {
            let cv = &cells[c * nv..(c + 1) * nv];
            facets.extend(local_face(dim, k).iter().map(|&i| cv[i]));
        }
        Self::new(dim, vertices, cells, facets, tag)
    }

    /// Builds a mesh from explicit boundary facets, validating volumes and
    /// that the listed facets are exactly the faces owned by a single cell.
    pub fn new(
        dim: usize,
        vertices: Vec<Vec3>,
        cells: Vec<usize>,
        boundary_facets: Vec<usize>,
        tag: &str,
    ) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidInput(format!("mesh dimension {dim}")));
        }
        let nv = dim + 1;
        if cells.len() % nv != 0 || boundary_facets.len() % dim != 0 {
            return Err(Error::InvalidInput("ragged cell or facet array".into()));
        }
        if let Some(&bad) = cells.iter().chain(&boundary_facets).find(|&&i| i >= vertices.len()) {
            return Err(Error::InvalidInput(format!("vertex index {bad} out of range")));
        }
        let n_cells = cells.len() / nv;
        for c in 0..n_cells {
            let p: Vec<Vec3> = cells[c * nv..(c + 1) * nv].iter().map(|&i| vertices[i]).collect();
            let v = signed_volume(dim, &p);
            if !(v > 0.0) {
                return Err(Error::NegativeVolume { cell: c, volume: v });
            }
        }
        let mut faces: HashMap<FaceKey, (usize, usize, usize)> = HashMap::new();
        for c in 0..n_cells {
            let cv = &cells[c * nv..(c + 1) * nv];
            for k in 0..nv {
                let f: Vec<usize> = local_face(dim, k).iter().map(|&i| cv[i]).collect();
                faces.entry(face_key(&f)).or_insert((0, c, k)).0 += 1;
            }
        }
        if let Some((_, v)) = faces.iter().find(|(_, v)| v.0 > 2) {
            return Err(Error::NotWatertight(format!("face of cell {} shared by {} cells", v.1, v.0)));
        }
        let n_bf = boundary_facets.len() / dim;
        let mut facet_cells = Vec::with_capacity(n_bf);
        let mut facet_local = Vec::with_capacity(n_bf);
        let mut facet_normals = Vec::with_capacity(n_bf);
        let mut facet_measures = Vec::with_capacity(n_bf);
        let mut seen = HashMap::new();
        for f in 0..n_bf {
            let fv = &boundary_facets[f * dim..(f + 1) * dim];
            let key = face_key(fv);
            if seen.insert(key, f).is_some() {
                return Err(Error::NotWatertight(format!("boundary facet {f} listed twice")));
            }
            let Some(&(cnt, c, k)) = faces.get(&key) else {
                return Err(Error::NotWatertight(format!("boundary facet {f} is not a cell face")));
            };
            if cnt != 1 {
                return Err(Error::NotWatertight(format!("boundary facet {f} is an interior face")));
            }
            let p: Vec<Vec3> = fv.iter().map(|&i| vertices[i]).collect();
            let (mut n, meas) = facet_geometry(dim, &p);
            let cc = cells[c * nv..(c + 1) * nv]
                .iter()
                .fold(Vec3::zeros(), |s, &i| s + vertices[i])
                / nv as f64;
            let fc = p.iter().fold(Vec3::zeros(), |s, q| s + q) / dim as f64;
            if n.dot(&(fc - cc)) < 0.0 {
                n = -n;
            }
            facet_cells.push(c);
            facet_local.push(k);
            facet_normals.push(n);
            facet_measures.push(meas);
        }
        let open = faces.values().filter(|v| v.0 == 1).count();
        if open != n_bf {
            return Err(Error::NotWatertight(format!(
                "{open} faces are owned by one cell but {n_bf} boundary facets are listed"
            )));
        }
        Ok(Self {
            dim,
            vertices,
            cells,
            boundary_facets,
            facet_normals,
            facet_measures,
            facet_cells,
            facet_local,
            domain_tag: tag.to_string(),
            origin_excluded: false,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    pub fn n_boundary_facets(&self) -> usize {
        self.boundary_facets.len() / self.dim
    }

    pub fn mesh_id(&self) -> &str {
        &self.domain_tag
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        let nv = self.dim + 1;
        &self.cells[c * nv..(c + 1) * nv]
    }

    pub fn facet(&self, f: usize) -> &[usize] {
        &self.boundary_facets[f * self.dim..(f + 1) * self.dim]
    }

    pub fn cell_points(&self, c: usize) -> Vec<Vec3> {
        self.cell(c).iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn facet_points(&self, f: usize) -> Vec<Vec3> {
        self.facet(f).iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn cell_volume(&self, c: usize) -> f64 {
        signed_volume(self.dim, &self.cell_points(c))
    }

    pub fn cell_centroid(&self, c: usize) -> Vec3 {
        self.cell_points(c).iter().fold(Vec3::zeros(), |s, p| s + p) / (self.dim + 1) as f64
    }

    pub fn facet_centroid(&self, f: usize) -> Vec3 {
        self.facet_points(f).iter().fold(Vec3::zeros(), |s, p| s + p) / self.dim as f64
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.n_cells()).map(|c| self.cell_volume(c)).sum()
    }

    /// `Σ_f |f| ν_f`, which vanishes for a closed boundary.
    pub fn normal_balance(&self) -> Vec3 {
        self.facet_normals
            .iter()
            .zip(&self.facet_measures)
            .fold(Vec3::zeros(), |s, (n, m)| s + n * *m)
    }

    /// Barycentric gradients of cell `c` (one per local vertex).
    pub fn bary_gradients(&self, c: usize) -> Vec<Vec3> {
        let p = self.cell_points(c);
        match self.dim {
            2 => {
                let j = nalgebra::Matrix2::new(p[1].x - p[0].x, p[2].x - p[0].x, p[1].y - p[0].y, p[2].y - p[0].y);
                let jit = j.try_inverse().expect("non-degenerate cell").transpose();
                let g1 = jit.column(0);
                let g2 = jit.column(1);
                let g1 = Vec3::new(g1[0], g1[1], 0.0);
                let g2 = Vec3::new(g2[0], g2[1], 0.0);
                vec![-g1 - g2, g1, g2]
            }
            _ => {
                let j = nalgebra::Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
                let jit = j.try_inverse().expect("non-degenerate cell").transpose();
                let g: Vec<Vec3> = (0..3).map(|k| jit.column(k).into_owned()).collect();
                vec![-g[0] - g[1] - g[2], g[0], g[1], g[2]]
            }
        }
    }

    /// Axis-aligned bounding box of cell `c`.
    pub fn cell_bbox(&self, c: usize) -> (Vec3, Vec3) {
        let p = self.cell_points(c);
        let mut lo = p[0];
        let mut hi = p[0];
        for q in &p[1..] {
            lo = lo.inf(q);
            hi = hi.sup(q);
        }
        (lo, hi)
    }

    /// Returns a copy translated by `-center`.
    pub fn translated(&self, center: &Vec3) -> Self {
        let mut m = self.clone();
        for v in &mut m.vertices {
            *v -= center;
        }
        m
    }

    /// Boundary vertex flags.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut b = vec![false; self.n_vertices()];
        for &v in &self.boundary_facets {
            b[v] = true;
        }
        b
    }
}
