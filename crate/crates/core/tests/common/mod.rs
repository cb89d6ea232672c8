#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use superdyn::generators::{cis_turns, conditioned, conjugate, jordan, GenRng};
use superdyn::CMatrix;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Random `V` with `cond(V)` drawn uniformly from `[1, max_cond]`, and `V⁻¹`.
pub fn similarity(d: usize, max_cond: f64, rng: &mut GenRng) -> (CMatrix, CMatrix) {
    let cond = rng.gen_range(1.0..=max_cond);
    conditioned(d, cond, false, rng).unwrap()
}

/// Same, with `log cond` uniform.
pub fn similarity_log(d: usize, max_cond: f64, rng: &mut GenRng) -> (CMatrix, CMatrix) {
    let cond = (rng.gen_range(0.0..=1.0) * max_cond.ln()).exp();
    conditioned(d, cond, false, rng).unwrap()
}

/// `V·diag(R e^{2πi p₁/q₁}, R e^{2πi p₂/q₂})·V⁻¹` and the least `n` with
/// both phases returning to the real axis.
pub fn rational_equal_modulus(rng: &mut GenRng) -> (CMatrix, u64) {
    let r = rng.gen_range(0.5..2.0);
    let mut turns = [0.0; 2];
    let mut order = 1;
    for t in turns.iter_mut() {
        let q = rng.gen_range(1..=20u64);
        let p = rng.gen_range(0..q);
        let g = gcd(p, q);
        order = lcm(order, q / g);
        *t = p as f64 / q as f64;
    }
    let d = CMatrix::diag(&[cis_turns(r, turns[0]), cis_turns(r, turns[1])]).unwrap();
    let (v, vi) = similarity(2, 10.0, rng);
    (conjugate(&d, &v, &vi), order)
}

/// Conjugated `diag(R₁e^{iθ₁}, R₂e^{iθ₂})` with `R₂/R₁ ∈ [1.5, 3]`.
pub fn modulus_mismatch(rng: &mut GenRng) -> CMatrix {
    let r1 = rng.gen_range(0.5..2.0);
    let r2 = r1 * rng.gen_range(1.5..=3.0);
    let d = CMatrix::diag(&[
        cis_turns(r1, rng.gen_range(0.0..1.0)),
        cis_turns(r2, rng.gen_range(0.0..1.0)),
    ])
    .unwrap();
    let (v, vi) = similarity(2, 10.0, rng);
    conjugate(&d, &v, &vi)
}

/// `V·J₂(λ)·V⁻¹` with `|λ| ∈ [0.5, 2]`.
pub fn conjugated_jordan(rng: &mut GenRng) -> CMatrix {
    let lambda = cis_turns(rng.gen_range(0.5..2.0), rng.gen_range(0.0..1.0));
    let j = jordan(lambda, 2).unwrap();
    let (v, vi) = similarity(2, 10.0, rng);
    conjugate(&j, &v, &vi)
}

/// Conjugated `diag(R e^{2πiθ_k})` with phases uniform in `[0, 1)`.
pub fn equal_modulus(d: usize, max_cond: f64, rng: &mut GenRng) -> CMatrix {
    let r = rng.gen_range(0.5..2.0);
    let entries: Vec<Complex64> = (0..d)
        .map(|_| cis_turns(r, rng.gen_range(0.0..1.0)))
        .collect();
    let (v, vi) = similarity(d, max_cond, rng);
    conjugate(&CMatrix::diag(&entries).unwrap(), &v, &vi)
}

/// Unimodular diagonal with phases uniform in `[0, 1)`.
pub fn unimodular_diag(d: usize, rng: &mut GenRng) -> CMatrix {
    let entries: Vec<Complex64> = (0..d)
        .map(|_| cis_turns(1.0, rng.gen_range(0.0..1.0)))
        .collect();
    CMatrix::diag(&entries).unwrap()
}

/// Closed-form operator residual of the Frobenius-optimal scalar for
/// `J₂(λ)ⁿ`, `|λ| = 1`: with `ν = 2/(2+n²)`, the residual matrix is
/// `[[ν−1, nν/λ], [0, ν−1]]`, whose norm is `(|b| + √(b² + 4a²))/2`.
pub fn jordan_operator_residual(n: u64) -> f64 {
    let n = n as f64;
    let nu = 2.0 / (2.0 + n * n);
    let a = nu - 1.0;
    let b = n * nu;
    (b + (b * b + 4.0 * a * a).sqrt()) / 2.0
}

/// Closed-form vector residual for `x = (0, 1)`: `n / √(n² + 1)`.
pub fn jordan_vector_residual(n: u64) -> f64 {
    let n = n as f64;
    n / (n * n + 1.0).sqrt()
}
