//! Line-oriented ASCII mesh files.
//!
//! ```text
//! # domain cube n=2
//! mesh 3 27 48 48
//! <nv coordinate lines>
//! <nc cell lines, 0-based vertex indices>
//! <nbf boundary facet lines>
//! ```
//!
//! Comment lines start with `#`; `# domain <tag>` restores the domain tag and
//! `# origin-excluded` marks meshes whose closure avoids the origin. Floats
//! use the shortest representation that round-trips. Normals are recomputed
//! on read.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::mesh::SimplicialMesh;
use crate::geometry::Vec3;

pub fn mesh_to_string(mesh: &SimplicialMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# domain {}", mesh.domain_tag);
    if mesh.origin_excluded {
        s.push_str("# origin-excluded\n");
    }
    let _ = writeln!(
        s,
        "mesh {} {} {} {}",
        mesh.dim,
        mesh.n_vertices(),
        mesh.n_cells(),
        mesh.n_boundary_facets()
    );
    for v in &mesh.vertices {
        let coords: Vec<String> = v.iter().take(mesh.dim).map(|c| format!("{c:?}")).collect();
        s.push_str(&coords.join(" "));
        s.push('\n');
    }
    let join = |ix: &[usize]| ix.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    for c in 0..mesh.n_cells() {
        s.push_str(&join(mesh.cell(c)));
        s.push('\n');
    }
    for f in 0..mesh.n_boundary_facets() {
        s.push_str(&join(mesh.facet(f)));
        s.push('\n');
    }
    s
}

pub fn write_mesh(mesh: &SimplicialMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, mesh_to_string(mesh))?;
    Ok(())
}

pub fn parse_mesh(text: &str) -> Result<SimplicialMesh> {
    let mut tag = String::from("file");
    let mut origin_excluded = false;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if let Some(t) = c.strip_prefix("domain ") {
                tag = t.trim().to_string();
            } else if c == "origin-excluded" {
                origin_excluded = true;
            }
            continue;
        }
        if !line.is_empty() {
            lines.push((i + 1, line));
        }
    }
    let mut it = lines.into_iter();
    let (hl, header) = it.next().ok_or(Error::MeshFormat { line: 1, msg: "missing header".into() })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 || h[0] != "mesh" {
        return Err(Error::MeshFormat { line: hl, msg: "expected `mesh <dim> <nv> <nc> <nbf>`".into() });
    }
    let num = |t: &str, line: usize| {
        t.parse::<usize>()
            .map_err(|_| Error::MeshFormat { line, msg: format!("bad integer `{t}`") })
    };
    let dim = num(h[1], hl)?;
    if !(dim == 2 || dim == 3) {
        return Err(Error::MeshFormat { line: hl, msg: format!("dimension {dim} not 2 or 3") });
    }
    let (nv, nc, nbf) = (num(h[2], hl)?, num(h[3], hl)?, num(h[4], hl)?);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = it.next().ok_or(Error::MeshFormat { line: hl, msg: "truncated vertex block".into() })?;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != dim {
            return Err(Error::MeshFormat { line: ln, msg: format!("expected {dim} coordinates") });
        }
        let mut v = Vec3::zeros();
        for (k, s) in t.iter().enumerate() {
            v[k] = s
                .parse::<f64>()
                .map_err(|_| Error::MeshFormat { line: ln, msg: format!("bad float `{s}`") })?;
        }
        vertices.push(v);
    }
    let mut read_block = |count: usize, width: usize, what: &str| -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(count * width);
        for _ in 0..count {
            let (ln, l) = it
                .next()
                .ok_or(Error::MeshFormat { line: hl, msg: format!("truncated {what} block") })?;
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != width {
                return Err(Error::MeshFormat { line: ln, msg: format!("expected {width} indices") });
            }
            for s in t {
                let i = num(s, ln)?;
                if i >= nv {
                    return Err(Error::MeshFormat { line: ln, msg: format!("vertex index {i} >= {nv}") });
                }
                out.push(i);
            }
        }
        Ok(out)
    };
    let cells = read_block(nc, dim + 1, "cell")?;
    let facets = read_block(nbf, dim, "facet")?;
    if let Some((ln, _)) = it.next() {
        return Err(Error::MeshFormat { line: ln, msg: "trailing data".into() });
    }
    let mut mesh = SimplicialMesh::new(dim, vertices, cells, facets, &tag)?;
    mesh.origin_excluded = origin_excluded;
    Ok(mesh)
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    parse_mesh(&std::fs::read_to_string(path)?)
}
