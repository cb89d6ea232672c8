//! Matrix families: the worked examples of the theory plus seeded random
//! constructions (unitaries, conditioned similarities).
//!
//! All randomness goes through [`rng`] (ChaCha8), so a seed fixes the output
//! on every platform.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numkernel::CMatrix;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `diag(R·e^{2πi·p_k})` with phases given in turns.
pub fn diag_circle(radius: f64, phases: &[f64]) -> Result<CMatrix> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if phases.is_empty() {
        return Err(Error::InvalidParameter("need at least one phase".into()));
    }
    let entries: Vec<Complex64> = phases.iter().map(|&p| cis_turns(radius, p)).collect();
    CMatrix::diag(&entries)
}

/// `r·e^{2πi·t}`, exact on the axes for quarter turns.
pub fn cis_turns(r: f64, t: f64) -> Complex64 {
    let f = t.rem_euclid(1.0);
    if f == 0.0 {
        Complex64::new(r, 0.0)
    } else if f == 0.25 {
        Complex64::new(0.0, r)
    } else if f == 0.5 {
        Complex64::new(-r, 0.0)
    } else if f == 0.75 {
        Complex64::new(0.0, -r)
    } else {
        Complex64::from_polar(r, TAU * f)
    }
}

/// `m×m` Jordan block: `λ` on the diagonal, ones above it.
pub fn jordan(lambda: Complex64, m: usize) -> Result<CMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("block size must be positive".into()));
    }
    let mut data = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        data[i * m + i] = lambda;
        if i + 1 < m {
            data[i * m + i + 1] = Complex64::new(1.0, 0.0);
        }
    }
    let field = if lambda.im == 0.0 {
        crate::Field::Real
    } else {
        crate::Field::Complex
    };
    CMatrix::new(m, field, data)
}

/// Truncated weighted backward shift on `K^d`: `e₁ ↦ 0`, `e_k ↦ w_k e_{k−1}`.
/// `weights` holds `w₂, …, w_d`.
pub fn backward_shift(weights: &[f64]) -> Result<CMatrix> {
    if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidParameter("weights must be positive".into()));
    }
    let d = weights.len() + 1;
    let mut data = vec![0.0; d * d];
    for (k, &w) in weights.iter().enumerate() {
        data[k * d + k + 1] = w;
    }
    CMatrix::from_real(d, &data)
}

/// Block diagonal of `[[a, b], [−b, a]]` rotation-dilation blocks.
pub fn rotation_blocks(blocks: &[(f64, f64)]) -> Result<CMatrix> {
    if blocks.is_empty() {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    let mats = blocks
        .iter()
        .map(|&(a, b)| CMatrix::from_real_rows(&[[a, b], [-b, a]]))
        .collect::<Result<Vec<_>>>()?;
    CMatrix::block_diag(&mats)
}

/// Companion matrix of the monic polynomial `zᵈ + c_{d−1}z^{d−1} + … + c₀`.
pub fn companion(coeffs: &[Complex64]) -> Result<CMatrix> {
    let d = coeffs.len();
    if d == 0 {
        return Err(Error::InvalidParameter("empty polynomial".into()));
    }
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 1..d {
        data[i * d + i - 1] = Complex64::new(1.0, 0.0);
    }
    for (i, c) in coeffs.iter().enumerate() {
        data[i * d + d - 1] = -c;
    }
    Ok(CMatrix::from_complex(d, data)?.demote_if_real())
}

/// Haar-like random unitary as a product of complex plane rotations and a
/// diagonal phase.
pub fn random_unitary(d: usize, rng: &mut GenRng) -> CMatrix {
    let mut u = CMatrix::diag(
        &(0..d)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
            .collect::<Vec<_>>(),
    )
    .expect("finite");
    for _ in 0..2 {
        for i in 0..d {
            for j in (i + 1)..d {
                let theta = rng.gen_range(0.0..TAU);
                let phi = rng.gen_range(0.0..TAU);
                u = u.matmul(&plane_rotation(d, i, j, theta, Complex64::from_polar(1.0, phi)));
            }
        }
    }
    u
}

/// Random real orthogonal matrix from plane rotations.
pub fn random_orthogonal(d: usize, rng: &mut GenRng) -> CMatrix {
    let mut q = CMatrix::identity(d);
    for _ in 0..2 {
        for i in 0..d {
            for j in (i + 1)..d {
                let theta = rng.gen_range(0.0..TAU);
                q = q.matmul(&plane_rotation(d, i, j, theta, Complex64::new(1.0, 0.0)));
            }
        }
    }
    q.demote_if_real()
}

fn plane_rotation(d: usize, i: usize, j: usize, theta: f64, phase: Complex64) -> CMatrix {
    let mut data = CMatrix::identity(d).data().to_vec();
    let (c, s) = (theta.cos(), theta.sin());
    data[i * d + i] = Complex64::new(c, 0.0);
    data[j * d + j] = Complex64::new(c, 0.0);
    data[i * d + j] = phase * s;
    data[j * d + i] = -phase.conj() * s;
    CMatrix::from_complex(d, data)
        .expect("finite")
        .demote_if_real()
}

/// Random `V` with 2-norm condition number exactly `cond` (up to rounding),
/// together with its exact-structure inverse.
///
/// `V = U₁·Σ·U₂` with `σ₁ = 1`, `σ_d = 1/cond` and log-uniform interior
/// singular values.
pub fn conditioned(
    d: usize,
    cond: f64,
    real: bool,
    rng: &mut GenRng,
) -> Result<(CMatrix, CMatrix)> {
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "condition bound must be >= 1, got {cond}"
        )));
    }
    let (u1, u2) = if real {
        (random_orthogonal(d, rng), random_orthogonal(d, rng))
    } else {
        (random_unitary(d, rng), random_unitary(d, rng))
    };
    let mut sigma: Vec<f64> = (0..d)
        .map(|k| {
            if k == 0 {
                1.0
            } else if k == d - 1 {
                1.0 / cond
            } else {
                (-rng.gen_range(0.0..1.0) * cond.ln()).exp()
            }
        })
        .collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let s = CMatrix::diag_real(&sigma)?;
    let s_inv = CMatrix::diag_real(&sigma.iter().map(|x| 1.0 / x).collect::<Vec<_>>())?;
    let v = u1.matmul(&s).matmul(&u2);
    let v_inv = u2.adjoint().matmul(&s_inv).matmul(&u1.adjoint());
    Ok((v, v_inv))
}

/// `V·A·V⁻¹` given both factors.
pub fn conjugate(a: &CMatrix, v: &CMatrix, v_inv: &CMatrix) -> CMatrix {
    let m = v.matmul(a).matmul(v_inv);
    if a.is_real() && v.is_real() && v_inv.is_real() {
        m.demote_if_real()
    } else {
        m
    }
}

/// Real matrix with i.i.d. entries uniform in `[−1, 1]`.
pub fn random_real(d: usize, rng: &mut GenRng) -> CMatrix {
    let data: Vec<f64> = (0..d * d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    CMatrix::from_real(d, &data).expect("finite")
}

/// Complex matrix with real and imaginary parts uniform in `[−1, 1]`.
pub fn random_complex(d: usize, rng: &mut GenRng) -> CMatrix {
    let data: Vec<Complex64> = (0..d * d)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    CMatrix::from_complex(d, data).expect("finite")
}
