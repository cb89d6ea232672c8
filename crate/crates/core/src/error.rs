use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {dim}x{dim}")]
    Shape { dim: usize, len: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("entry ({row}, {col}) has non-zero imaginary part in a real matrix")]
    FieldMismatch { row: usize, col: usize },

    #[error("expected a real matrix")]
    NotReal,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("tolerance {tol} is too coarse to separate eigenvalues")]
    DegenerateTolerance { tol: f64 },

    #[error("invalid tolerance {0}: must be positive and finite")]
    InvalidTolerance(f64),

    #[error("eigenvalue {re}{im:+}i has no conjugate partner")]
    NotConjugateClosed { re: f64, im: f64 },

    #[error("spectrum has no common positive radius")]
    NoCommonRadius,

    #[error("spectrum is not semisimple")]
    NotSemisimple,

    #[error("matrix power is exactly zero; no scalar brings it close to the identity")]
    ZeroPower,

    #[error("witness vector must be non-zero")]
    ZeroVector,

    #[error("search budget {base}^{dim} exceeds 2^63 - 1")]
    BudgetOverflow { base: u64, dim: u32 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
