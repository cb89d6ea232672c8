//! Super-recurrence, super-rigidity and uniform super-rigidity of
//! finite-dimensional linear operators.
//!
//! In finite dimension the three notions coincide: a matrix is in all of them
//! exactly when it is diagonalizable with every eigenvalue on one circle
//! `|z| = R` with `R > 0`. This crate decides that property numerically
//! ([`classifier`]), produces explicit witnesses `(n, λ)` with
//! `‖λ·Aⁿ − I‖` small ([`witness`]), and checks the structural laws of the
//! theory (similarity, powers, scaling, adjoints) as executable tests
//! ([`lawcheck`]).
//!
//! The dense complex kernel in [`numkernel`] carries everything else.
//! Witness search is data-parallel over time ranges when the `parallel`
//! feature is enabled (the default); disabling it gives an identical
//! sequential path.

pub mod classifier;
pub mod error;
pub mod generators;
pub mod lawcheck;
pub mod numkernel;
pub mod witness;


pub use error::{Error, Result};

pub use numkernel::{CMatrix, Field, ScaledPower, SpectrumReport};
pub use lawcheck::{LawId, LawReport};
pub use witness::{SearchConfig, WitnessCertificate, WitnessSearch};
pub use classifier::{classify, classify_complex, classify_real, Certificate, DynamicsClass, Obstruction, ObstructionKind, Verdict};


pub use num_complex::Complex64;
