//! Sparse symmetric linear algebra, scalar root finding and the star-center LP.

pub mod eigen;
pub mod ldl;
pub mod lp;
pub mod roots;
pub mod sparse;

pub use eigen::{
    gen_eig_smallest, gen_eig_smallest_with, EigenOptions, EigenResult, PencilKind, SolverStats,
    DEFAULT_SEED,
};
pub use ldl::{factor_solve, LdlFactor, LdlOptions};
pub use lp::{lp_max_margin, LpProblem};
pub use roots::find_root_bracketed;
pub use sparse::{assemble_csr, SparseMat, TripletBuilder};
