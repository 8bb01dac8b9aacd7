//! Versioned JSON run report.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::SimplicialMesh;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDescriptor {
    pub id: String,
    pub dim: usize,
    pub n_vertices: usize,
    pub n_cells: usize,
    pub n_boundary_facets: usize,
    pub origin_excluded: bool,
}

impl MeshDescriptor {
    pub fn of(mesh: &SimplicialMesh) -> Self {
        Self {
            id: mesh.mesh_id().to_string(),
            dim: mesh.dim,
            n_vertices: mesh.n_vertices(),
            n_cells: mesh.n_cells(),
            n_boundary_facets: mesh.n_boundary_facets(),
            origin_excluded: mesh.origin_excluded,
        }
    }
}

/// One numeric outcome. `tolerance` is `None` for purely informational
/// values, which always pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl ResultEntry {
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, oracle: None, provenance: None, tolerance: None, pass: true }
    }

    /// Passes when `value <= tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, oracle: None, provenance: None, tolerance: Some(tol), pass: value <= tol }
    }

    /// Passes when `value >= floor`; the floor is stored as the tolerance.
    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Self { name: name.into(), value, oracle: None, provenance: None, tolerance: Some(floor), pass: value >= floor }
    }

    /// Passes when `|value - oracle| <= rel_tol * |oracle|`.
    pub fn against(name: impl Into<String>, value: f64, oracle: f64, rel_tol: f64, provenance: &str) -> Self {
        Self {
            name: name.into(),
            value,
            oracle: Some(oracle),
            provenance: Some(provenance.into()),
            tolerance: Some(rel_tol),
            pass: (value - oracle).abs() <= rel_tol * oracle.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub schema_version: u32,
    pub command: String,
    pub mesh: Option<MeshDescriptor>,
    pub results: Vec<ResultEntry>,
    pub timing_ms: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION,
            command,
            mesh: None,
            results: Vec::new(),
            timing_ms: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, r: ResultEntry) {
        self.results.push(r);
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
