//! Operator norms and singular values.
//!
//! [`spectral_norm`] is the workhorse of witness search and uses power
//! iteration on `AᴴA`. [`singular_values`] is a one-sided Jacobi SVD used
//! where the whole spectrum of singular values matters (smallest singular
//! value, condition numbers, rank margins).

use num_complex::Complex64;

use super::matrix::{dot, vec_norm, CMatrix};
use crate::error::{Error, Result};

/// Iteration cap of the power method.
pub const POWER_ITERATION_CAP: usize = 10_000;
/// Step length of the unit iterate (up to phase) that ends the iteration.
pub const POWER_ITERATION_RTOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 80;
/// Caps the operator at `(AᴴA)^(2^MAX_SQUARINGS)`.
const MAX_SQUARINGS: usize = 48;

/// Largest singular value `‖A‖₂`.
///
/// Power iteration on `AᴴA` from two fixed start vectors (all-ones, then a
/// fixed quasi-random phase vector); the larger estimate wins. Both starts are
/// deterministic so results are bit-stable. The second start covers inputs
/// whose dominant right singular vector is orthogonal to all-ones.
///
/// The iteration operator is squared after every step without convergence
/// (`AᴴA`, `(AᴴA)²`, `(AᴴA)⁴`, …), so clustered leading singular values
/// separate in a bounded number of steps. The iteration stops when the unit
/// iterate no longer moves, not when the estimate stagnates.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    let d = a.dim();
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Work on A / max|a_ij| so that ‖A v‖² cannot overflow.
    let b = a.scale_real(1.0 / scale);
    let filter = gram(&b);

    let ones = vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d];
    let first = power_iterate(&b, &filter, ones)?;
    if d == 1 {
        return Ok(first * scale);
    }
    let golden = 0.618_033_988_749_894_9_f64;
    let phased: Vec<Complex64> = (0..d)
        .map(|j| {
            let t = std::f64::consts::TAU * golden * (j as f64 + 1.0);
            Complex64::from_polar(1.0 + j as f64 / d as f64, t)
        })
        .collect();
    let second = power_iterate(&b, &filter, phased)?;
    Ok(first.max(second) * scale)
}

fn gram(b: &CMatrix) -> CMatrix {
    b.adjoint().matmul(b)
}

/// `(h / ‖h‖_F)²`.
fn square_normalized(h: &CMatrix) -> CMatrix {
    let f = h.frobenius_norm();
    if f == 0.0 {
        return h.clone();
    }
    let h = h.scale_real(1.0 / f);
    h.matmul(&h)
}

fn power_iterate(b: &CMatrix, filter: &CMatrix, mut v: Vec<Complex64>) -> Result<f64> {
    let mut filter = filter.clone();
    let nv = vec_norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut sigma = vec_norm(&b.mat_vec(&v));
    for it in 1..=POWER_ITERATION_CAP {
        let u = filter.mat_vec(&v);
        let nu = vec_norm(&u);
        if nu == 0.0 {
            // v lies in the kernel of the filter; the estimate so far stands.
            return Ok(sigma);
        }
        let next: Vec<Complex64> = u.into_iter().map(|z| z / nu).collect();
        let overlap: Complex64 = v.iter().zip(&next).map(|(a, b)| a.conj() * b).sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let moved = vec_norm(
            &next
                .iter()
                .zip(&v)
                .map(|(a, b)| a - phase * b)
                .collect::<Vec<_>>(),
        );
        v = next;
        let next_sigma = vec_norm(&b.mat_vec(&v));
        // Stop once the iterate's direction has settled.
        if moved <= POWER_ITERATION_RTOL {
            return Ok(next_sigma.max(sigma));
        }
        sigma = next_sigma;
        if it <= MAX_SQUARINGS {
            filter = square_normalized(&filter);
        }
    }
    Err(Error::NonConvergence {
        routine: "spectral_norm",
        iterations: POWER_ITERATION_CAP,
    })
}

/// All singular values, descending, by one-sided (Hestenes) Jacobi.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let d = a.dim();
    // Column-major working copy.
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|j| (0..d).map(|i| a.get(i, j)).collect())
        .collect();
    let eps = f64::EPSILON;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                let (cp, cq) = (&mut lo[p], &mut hi[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    // Rotate (a_p, e^{-iφ} a_q) by a real Jacobi rotation.
                    let yq = *y * phase.conj();
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMatrix) -> f64 {
    *singular_values(a).last().expect("non-empty matrix")
}

/// 2-norm condition number `σ_max / σ_min` (infinite when singular).
pub fn condition_number(a: &CMatrix) -> f64 {
    let sv = singular_values(a);
    let lo = *sv.last().expect("non-empty matrix");
    if lo == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// √(largest eigenvalue of AᴴA) for 2×2 input, closed form.
    fn sigma_max_2x2(a: &CMatrix) -> f64 {
        let g = a.adjoint().matmul(a);
        let (p, q, r) = (g.get(0, 0).re, g.get(0, 1), g.get(1, 1).re);
        let tr = p + r;
        let det = p * r - q.norm_sqr();
        ((tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
    }

    #[test]
    fn diagonal_and_nilpotent_examples() {
        let a = CMatrix::diag_real(&[3.0, 1.0]).unwrap();
        assert!((spectral_norm(&a).unwrap() - 3.0).abs() < 1e-12);
        let n = CMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
        assert!((spectral_norm(&n).unwrap() - 2.0).abs() < 1e-12);
        assert!((sigma_max_2x2(&n) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn start_vector_orthogonal_to_ones() {
        // Right singular vector (1, -1)/√2 is orthogonal to the all-ones start.
        let a = CMatrix::from_real_rows(&[[1.0, -1.0], [1.0, -1.0]]).unwrap();
        assert!((spectral_norm(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_norm_is_zero() {
        assert_eq!(spectral_norm(&CMatrix::zeros(3)).unwrap(), 0.0);
        assert_eq!(singular_values(&CMatrix::zeros(2)), vec![0.0, 0.0]);
    }

    #[test]
    fn unitary_has_unit_singular_values() {
        let s = 0.5_f64.sqrt();
        let u = CMatrix::from_complex_rows(&[[c(s, 0.0), c(0.0, s)], [c(0.0, s), c(s, 0.0)]])
            .unwrap();
        assert!((spectral_norm(&u).unwrap() - 1.0).abs() < 1e-14);
        for sv in singular_values(&u) {
            assert!((sv - 1.0).abs() < 1e-14);
        }
        assert!((condition_number(&u) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_matches_closed_form_2x2() {
        let a = CMatrix::from_complex_rows(&[[c(1.0, 2.0), c(-0.5, 0.3)], [c(0.2, -1.0), c(3.0, 0.0)]])
            .unwrap();
        let sv = singular_values(&a);
        assert!((sv[0] - sigma_max_2x2(&a)).abs() < 1e-13);
        let det = (a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0)).norm();
        assert!((sv[0] * sv[1] - det).abs() < 1e-12);
        assert!((spectral_norm(&a).unwrap() - sv[0]).abs() < 1e-8 * sv[0]);
    }

    #[test]
    fn singular_matrix_has_zero_condition_inverse() {
        let a = CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(min_singular_value(&a) < 1e-15);
        assert!(condition_number(&a) > 1e15);
    }
}
