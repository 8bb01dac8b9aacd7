pub mod cli;
pub mod convergence;
pub mod eig2d;
pub mod eig3d;
pub mod error;
pub mod fem;
pub mod fields;
pub mod geometry;
pub mod identity;
pub mod linalg;
pub mod probe;

pub use error::{Error, Result};
