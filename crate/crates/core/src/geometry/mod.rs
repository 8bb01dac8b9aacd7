//! Meshes of the test domains, quadrature, integration and the star kernel.

pub mod edges;
pub mod generate;
pub mod integrate;
pub mod io;
pub mod mesh;
pub mod quadrature;
pub mod star;

pub type Vec3 = nalgebra::Vector3<f64>;

pub use edges::EdgeTopology;
pub use generate::{generate_mesh, DomainSpec};
pub use integrate::{
    for_each_cell_point, for_each_facet_point, for_each_sphere_point, integrate_boundary,
    integrate_volume, CellPoint, FacetPoint,
};
pub use io::{mesh_to_string, parse_mesh, read_mesh, write_mesh};
pub use mesh::SimplicialMesh;
pub use quadrature::{quad_rule, QuadratureRule};
pub use star::{min_support, star_kernel, DEFAULT_STAR_TOL};
