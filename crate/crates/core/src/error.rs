use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("triplet ({row}, {col}) out of bounds for a {n_rows}x{n_cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("zero pivot at row {index} (value {value:e})")]
    SingularPivot { index: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}")]
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("linear program is unbounded (degenerate constraint set)")]
    UnboundedLp,

    #[error("unknown domain descriptor `{0}`")]
    UnknownDomain(String),

    #[error("no {dim}-simplex quadrature rule of order {order}")]
    UnsupportedQuadrature { dim: usize, order: usize },

    #[error("mesh file line {line}: {msg}")]
    MeshFormat { line: usize, msg: String },

    #[error("cell {cell} has non-positive volume {volume:e}")]
    NegativeVolume { cell: usize, volume: f64 },

    #[error("boundary is not watertight: {0}")]
    NotWatertight(String),

    #[error("origin lies in the closure of the domain (cell {cell}); the weighted identity requires 0 outside the domain when alpha > 0")]
    OriginInDomain { cell: usize },

    #[error("power weight with alpha = {alpha} evaluated at the origin")]
    WeightAtOrigin { alpha: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
