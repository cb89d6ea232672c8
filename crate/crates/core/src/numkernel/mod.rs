//! Dense complex linear algebra for small square matrices (desk scale,
//! `d ≤ 64`): arithmetic, eigenvalues with multiplicities, numerical rank,
//! operator norms and overflow-safe matrix powers.

mod eig;
mod matrix;
mod norms;
mod power;
mod rank;

pub use eig::{cluster, eig, eigenvalues, Eigenvalue, SpectrumReport};
pub use matrix::{CMatrix, Field};
pub use norms::{
    condition_number, min_singular_value, singular_values, spectral_norm, POWER_ITERATION_CAP,
    POWER_ITERATION_RTOL,
};
pub use power::{scaled_power, ScaledPower};
pub use rank::{geometric_multiplicity, numerical_rank, rank_threshold, PivotedQr};

pub(crate) use eig::check_tol;
pub(crate) use matrix::{dot, vec_norm};

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}
