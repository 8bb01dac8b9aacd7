//! Structured mesh generators for the test domains.
//!
//! Every domain starts from a uniform grid of squares or cubes split into
//! Kuhn simplices. The split is mirrored through the domain center so that
//! each diagonal runs from the cell corner nearest the center to the far
//! corner; this keeps the split conforming and avoids cells whose vertices
//! all sit on a curved boundary after the radial map.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::mesh::{signed_volume, SimplicialMesh};
use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DomainSpec {
    Square,
    Disk,
    LShape,
    Annulus { r0: f64, r1: f64 },
    Cube,
    Ball,
    Shell { r0: f64, r1: f64 },
}

impl DomainSpec {
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Square | DomainSpec::Disk | DomainSpec::LShape | DomainSpec::Annulus { .. } => 2,
            _ => 3,
        }
    }

    pub fn origin_excluded(&self) -> bool {
        matches!(self, DomainSpec::Annulus { .. } | DomainSpec::Shell { .. })
    }

    /// Exact measure of the continuous domain.
    pub fn exact_volume(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            DomainSpec::Square | DomainSpec::Cube => 1.0,
            DomainSpec::Disk => PI,
            DomainSpec::LShape => 3.0,
            DomainSpec::Annulus { r0, r1 } => PI * (r1 * r1 - r0 * r0),
            DomainSpec::Ball => 4.0 / 3.0 * PI,
            DomainSpec::Shell { r0, r1 } => 4.0 / 3.0 * PI * (r1.powi(3) - r0.powi(3)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let DomainSpec::Annulus { r0, r1 } | DomainSpec::Shell { r0, r1 } = *self {
            if !(r0 > 0.0 && r0 < r1) {
                return Err(Error::InvalidInput(format!("0 < r0 < r1 required (r0 = {r0}, r1 = {r1})")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Square => f.write_str("square"),
            DomainSpec::Disk => f.write_str("disk"),
            DomainSpec::LShape => f.write_str("lshape"),
            DomainSpec::Cube => f.write_str("cube"),
            DomainSpec::Ball => f.write_str("ball"),
            DomainSpec::Annulus { r0, r1 } => write!(f, "annulus({r0},{r1})"),
            DomainSpec::Shell { r0, r1 } => write!(f, "shell({r0},{r1})"),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    /// Accepts `square`, `disk`, `lshape`, `cube`, `ball`, and
    /// `annulus(r0,r1)` / `shell(r0,r1)` (radii default to 1 and 2).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::UnknownDomain(s.to_string())),
            None => (s, None),
        };
        let radii = || -> Result<(f64, f64)> {
            let Some(a) = args else { return Ok((1.0, 2.0)) };
            let parts: Vec<&str> = a.split(',').map(str::trim).collect();
            let parse = |t: &str| t.parse::<f64>().map_err(|_| Error::UnknownDomain(s.to_string()));
            match parts.as_slice() {
                [a, b] => Ok((parse(a)?, parse(b)?)),
                _ => Err(Error::UnknownDomain(s.to_string())),
            }
        };
        let spec = match (name, args) {
            ("square", None) => DomainSpec::Square,
            ("disk", None) => DomainSpec::Disk,
            ("lshape", None) => DomainSpec::LShape,
            ("cube", None) => DomainSpec::Cube,
            ("ball", None) => DomainSpec::Ball,
            ("annulus", _) => {
                let (r0, r1) = radii()?;
                DomainSpec::Annulus { r0, r1 }
            }
            ("shell", _) => {
                let (r0, r1) = radii()?;
                DomainSpec::Shell { r0, r1 }
            }
            _ => return Err(Error::UnknownDomain(s.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Uniform grid description: `counts[k]` cells of width `h` starting at `lo`.
struct Grid {
    dim: usize,
    lo: [f64; 3],
    h: f64,
    counts: [usize; 3],
    center: [f64; 3],
}

fn permutations(dim: usize) -> Vec<Vec<usize>> {
    if dim == 2 {
        vec![vec![0, 1], vec![1, 0]]
    } else {
        vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ]
    }
}

fn build(
    grid: &Grid,
    keep: impl Fn(&Vec3) -> bool,
    map: impl Fn(&Vec3) -> Vec3,
    tag: &str,
) -> Result<SimplicialMesh> {
    let d = grid.dim;
    let cz = if d == 3 { grid.counts[2] } else { 1 };
    let point = |ix: [usize; 3]| {
        let mut p = Vec3::zeros();
        for k in 0..d {
            p[k] = grid.lo[k] + grid.h * ix[k] as f64;
        }
        p
    };
    let mut ids: HashMap<[usize; 3], usize> = HashMap::new();
    let mut simplices: Vec<[[usize; 3]; 4]> = Vec::new();
    for k in 0..cz {
        for j in 0..grid.counts[1] {
            for i in 0..grid.counts[0] {
                let base = [i, j, k];
                let mut c = point(base);
                for a in 0..d {
                    c[a] += 0.5 * grid.h;
                }
                if !keep(&c) {
                    continue;
                }
                let flip: Vec<bool> = (0..d).map(|a| c[a] > grid.center[a]).collect();
                let corner = |local: [usize; 3]| {
                    let mut ix = base;
                    for a in 0..d {
                        let l = if flip[a] { 1 - local[a] } else { local[a] };
                        ix[a] += l;
                    }
                    ix
                };
                for perm in permutations(d) {
                    let mut local = [0usize; 3];
                    let mut s = [[0usize; 3]; 4];
                    s[0] = corner(local);
                    for (step, &axis) in perm.iter().enumerate() {
                        local[axis] = 1;
                        s[step + 1] = corner(local);
                    }
                    simplices.push(s);
                }
            }
        }
    }
    // Number the used grid points lexicographically (z, y, x).
    let mut used: Vec<[usize; 3]> = simplices.iter().flat_map(|s| s[..=d].to_vec()).collect();
    used.sort_unstable_by_key(|ix| (ix[2], ix[1], ix[0]));
    used.dedup();
    let mut vertices = Vec::with_capacity(used.len());
    for (id, ix) in used.iter().enumerate() {
        ids.insert(*ix, id);
        vertices.push(point(*ix));
    }
    let mut cells = Vec::with_capacity(simplices.len() * (d + 1));
    for s in &simplices {
        let mut idx: Vec<usize> = s[..=d].iter().map(|ix| ids[ix]).collect();
        let p: Vec<Vec3> = idx.iter().map(|&i| vertices[i]).collect();
        if signed_volume(d, &p) < 0.0 {
            idx.swap(d - 1, d);
        }
        cells.extend(idx);
    }
    let mapped: Vec<Vec3> = vertices.iter().map(map).collect();
    SimplicialMesh::from_cells(d, mapped, cells, tag)
}

fn inf_norm(p: &Vec3) -> f64 {
    p.x.abs().max(p.y.abs()).max(p.z.abs())
}

/// Square-to-round map: keeps `‖p‖∞` as the Euclidean radius.
fn round(p: &Vec3) -> Vec3 {
    let r2 = p.norm();
    if r2 == 0.0 {
        *p
    } else {
        p * (inf_norm(p) / r2)
    }
}

/// Meshes the domain at refinement level `n`.
///
/// `n` counts cells per side for the square, cube, disk and ball (the latter
/// two on `[-1, 1]^d`), cells per unit length for the L-shape, and cells per
/// unit half-width for the annulus and shell (`n >= 2`), whose radial
/// direction receives `n - n/2` layers.
pub fn generate_mesh(spec: &DomainSpec, n: usize) -> Result<SimplicialMesh> {
    if n == 0 {
        return Err(Error::InvalidInput("refinement level n must be >= 1".into()));
    }
    spec.validate()?;
    let tag = format!("{spec} n={n}");
    let d = spec.dim();
    let all = |_: &Vec3| true;
    let id = |p: &Vec3| *p;
    let mut mesh = match *spec {
        DomainSpec::Square | DomainSpec::Cube => {
            let g = Grid { dim: d, lo: [0.0; 3], h: 1.0 / n as f64, counts: [n; 3], center: [0.5; 3] };
            build(&g, all, id, &tag)?
        }
        DomainSpec::Disk | DomainSpec::Ball => {
            let g = Grid { dim: d, lo: [-1.0; 3], h: 2.0 / n as f64, counts: [n; 3], center: [0.0; 3] };
            build(&g, all, round, &tag)?
        }
        DomainSpec::LShape => {
            let g = Grid { dim: 2, lo: [0.0; 3], h: 1.0 / n as f64, counts: [2 * n; 3], center: [1.0; 3] };
            build(&g, |c| !(c.x > 1.0 && c.y > 1.0), id, &tag)?
        }
        DomainSpec::Annulus { r0, r1 } | DomainSpec::Shell { r0, r1 } => {
            if n < 2 {
                return Err(Error::InvalidInput("annulus and shell need n >= 2".into()));
            }
            let s0 = (n / 2) as f64 / n as f64;
            let g = Grid { dim: d, lo: [-1.0; 3], h: 1.0 / n as f64, counts: [2 * n; 3], center: [0.0; 3] };
            let map = move |p: &Vec3| {
                let s = inf_norm(p);
                let r = r0 + (s - s0) / (1.0 - s0) * (r1 - r0);
                p * (r / p.norm())
            };
            build(&g, |c| inf_norm(c) > s0, map, &tag)?
        }
    };
    mesh.origin_excluded = spec.origin_excluded();
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_counts() {
        let m = generate_mesh(&DomainSpec::Square, 2).unwrap();
        assert_eq!((m.n_vertices(), m.n_cells(), m.n_boundary_facets()), (9, 8, 8));
    }

    #[test]
    fn cube_counts() {
        let m = generate_mesh(&DomainSpec::Cube, 2).unwrap();
        assert_eq!((m.n_vertices(), m.n_cells(), m.n_boundary_facets()), (27, 48, 48));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["square", "disk", "lshape", "cube", "ball", "annulus(1,2)", "shell(0.5,2.5)"] {
            let d: DomainSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!(matches!("torus".parse::<DomainSpec>(), Err(Error::UnknownDomain(_))));
        assert!("annulus(2,1)".parse::<DomainSpec>().is_err());
    }

    #[test]
    fn disk_area_converges() {
        let err = |n| (generate_mesh(&DomainSpec::Disk, n).unwrap().total_volume() - std::f64::consts::PI).abs();
        let (e1, e2) = (err(16), err(32));
        assert!(e2 < e1 / 3.5, "{e1} {e2}");
    }

    #[test]
    fn curved_boundary_vertices_on_circle() {
        let m = generate_mesh(&DomainSpec::Annulus { r0: 1.0, r1: 2.0 }, 4).unwrap();
        for f in 0..m.n_boundary_facets() {
            for &v in m.facet(f) {
                let r = m.vertices[v].norm();
                assert!((r - 1.0).abs() < 1e-14 || (r - 2.0).abs() < 1e-14, "r = {r}");
            }
        }
        assert!(m.origin_excluded);
    }
}
