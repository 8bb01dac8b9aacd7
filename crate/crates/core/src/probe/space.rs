//! Continuous P1 vector fields on tetrahedra with nodal boundary conditions
//! imposed through per-vertex direction frames.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::lagrange::p1_local;
use crate::geometry::{SimplicialMesh, Vec3};
use crate::linalg::sparse::{SparseMat, TripletBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeBc {
    /// Both tangential components vanish at boundary nodes (`u × ν = 0`).
    TangentZero,
    /// The normal component vanishes at boundary nodes (`u·ν = 0`).
    NormalZero,
    /// No constraint.
    Free,
}

impl std::fmt::Display for ProbeBc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProbeBc::TangentZero => "tangent-zero",
            ProbeBc::NormalZero => "normal-zero",
            ProbeBc::Free => "free",
        })
    }
}

impl std::str::FromStr for ProbeBc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tangent" | "tangent-zero" => Ok(ProbeBc::TangentZero),
            "normal" | "normal-zero" => Ok(ProbeBc::NormalZero),
            "free" => Ok(ProbeBc::Free),
            _ => Err(Error::InvalidInput(format!("unknown boundary condition {s:?} (tangent|normal|free)"))),
        }
    }
}

/// Area-weighted nodal normals; `None` at interior vertices.
pub fn nodal_normals(mesh: &SimplicialMesh) -> Vec<Option<Vec3>> {
    let mut acc = vec![Vec3::zeros(); mesh.n_vertices()];
    let mut hit = vec![false; mesh.n_vertices()];
    for f in 0..mesh.n_boundary_facets() {
        for &v in mesh.facet(f) {
            acc[v] += mesh.facet_normals[f] * mesh.facet_measures[f];
            hit[v] = true;
        }
    }
    acc.into_iter().zip(hit).map(|(n, h)| h.then(|| n.normalize())).collect()
}

fn tangent_pair(n: &Vec3) -> (Vec3, Vec3) {
    let axis = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vec3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    let t1 = n.cross(&axis).normalize();
    (t1, n.cross(&t1))
}

/// Reduced coordinates: each vertex carries an orthonormal set of allowed
/// directions, so the constraint holds exactly for every coefficient vector.
pub struct P1VectorSpace<'m> {
    pub mesh: &'m SimplicialMesh,
    pub bc: ProbeBc,
    pub normals: Vec<Option<Vec3>>,
    /// `(vertex, direction)` of each reduced unknown, grouped by vertex.
    pub dofs: Vec<(usize, Vec3)>,
    /// First reduced unknown of each vertex (length `n_vertices + 1`).
    pub offsets: Vec<usize>,
    pub mass: SparseMat,
    pub stiffness: SparseMat,
}

impl<'m> P1VectorSpace<'m> {
    pub fn new(mesh: &'m SimplicialMesh, bc: ProbeBc) -> Result<Self> {
        if mesh.dim != 3 {
            return Err(Error::InvalidInput("the probe needs a 3D mesh".into()));
        }
        let normals = nodal_normals(mesh);
        let mut dofs = Vec::new();
        let mut offsets = vec![0];
        for (v, n) in normals.iter().enumerate() {
            match (n, bc) {
                (Some(n), ProbeBc::TangentZero) => dofs.push((v, *n)),
                (Some(n), ProbeBc::NormalZero) => {
                    let (t1, t2) = tangent_pair(n);
                    dofs.push((v, t1));
                    dofs.push((v, t2));
                }
                _ => dofs.extend([Vec3::x(), Vec3::y(), Vec3::z()].map(|e| (v, e))),
            }
            offsets.push(dofs.len());
        }
        let mut sp = Self { mesh, bc, normals, dofs, offsets, mass: SparseMat::identity(0), stiffness: SparseMat::identity(0) };
        let (mut tm, mut tk) = (sp.builder(), sp.builder());
        for c in 0..mesh.n_cells() {
            let (k, m) = p1_local(mesh, c);
            sp.scatter_scalar(&mut tm, c, &m);
            sp.scatter_scalar(&mut tk, c, &k);
        }
        sp.mass = tm.build()?;
        sp.stiffness = tk.build()?;
        Ok(sp)
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.len()
    }

    pub(crate) fn builder(&self) -> TripletBuilder {
        let n = self.n_dofs();
        TripletBuilder::with_capacity(n, n, 16 * 9 * self.mesh.n_cells())
    }

    fn vertex_dofs(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// Adds a scalar local matrix (tensored with the identity) of cell `c`.
    pub(crate) fn scatter_scalar(&self, b: &mut TripletBuilder, c: usize, local: &[f64]) {
        let cv = self.mesh.cell(c);
        for (a, &va) in cv.iter().enumerate() {
            for (bb, &vb) in cv.iter().enumerate() {
                let s = local[a * 4 + bb];
                for i in self.vertex_dofs(va) {
                    for j in self.vertex_dofs(vb) {
                        b.push(i, j, s * self.dofs[i].1.dot(&self.dofs[j].1));
                    }
                }
            }
        }
    }

    /// Adds a full local matrix of cell `c` with rows/columns ordered
    /// `(vertex, component)`, i.e. `12 × 12` row-major.
    pub(crate) fn scatter_vector(&self, b: &mut TripletBuilder, c: usize, local: &[f64]) {
        let cv = self.mesh.cell(c);
        for (a, &va) in cv.iter().enumerate() {
            for (bb, &vb) in cv.iter().enumerate() {
                let blk = nalgebra::Matrix3::from_fn(|p, q| local[(3 * a + p) * 12 + 3 * bb + q]);
                for i in self.vertex_dofs(va) {
                    let left = blk.transpose() * self.dofs[i].1;
                    for j in self.vertex_dofs(vb) {
                        b.push(i, j, left.dot(&self.dofs[j].1));
                    }
                }
            }
        }
    }

    pub fn to_nodal(&self, r: &[f64]) -> Vec<Vec3> {
        let mut u = vec![Vec3::zeros(); self.mesh.n_vertices()];
        for (i, (v, e)) in self.dofs.iter().enumerate() {
            u[*v] += e * r[i];
        }
        u
    }

    /// Orthogonal (per-vertex Euclidean) projection of nodal vectors onto the
    /// constrained space, in reduced coordinates.
    pub fn project(&self, u: &[Vec3]) -> Vec<f64> {
        self.dofs.iter().map(|(v, e)| e.dot(&u[*v])).collect()
    }

    /// Largest constrained component at boundary nodes (tangential part for
    /// tangent-zero, normal part for normal-zero).
    pub fn bc_violation(&self, u: &[Vec3]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, n) in self.normals.iter().enumerate() {
            if let Some(n) = n {
                let bad = match self.bc {
                    ProbeBc::TangentZero => u[v].cross(n).norm(),
                    ProbeBc::NormalZero => u[v].dot(n).abs(),
                    ProbeBc::Free => 0.0,
                };
                worst = worst.max(bad);
            }
        }
        worst
    }

    pub fn l2_norm(&self, r: &[f64]) -> f64 {
        self.mass.bilinear(r, r).max(0.0).sqrt()
    }
}
