mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use superdyn::numkernel::{singular_values, spectral_norm};
use superdyn::CMatrix;

/// Eigenvalues of a Hermitian 3×3 matrix by the trigonometric solution of
/// its characteristic cubic, largest first.
fn hermitian_eigs_3x3(g: &CMatrix) -> [f64; 3] {
    let a = |i, j| g.get(i, j);
    let p1 = a(0, 1).norm_sqr() + a(0, 2).norm_sqr() + a(1, 2).norm_sqr();
    let q = (a(0, 0).re + a(1, 1).re + a(2, 2).re) / 3.0;
    let p2 = (a(0, 0).re - q).powi(2) + (a(1, 1).re - q).powi(2) + (a(2, 2).re - q).powi(2)
        + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = g.shift(Complex64::new(q, 0.0)).scale_real(1.0 / p);
    let det = (b.get(0, 0) * (b.get(1, 1) * b.get(2, 2) - b.get(1, 2) * b.get(2, 1))
        - b.get(0, 1) * (b.get(1, 0) * b.get(2, 2) - b.get(1, 2) * b.get(2, 0))
        + b.get(0, 2) * (b.get(1, 0) * b.get(2, 1) - b.get(1, 1) * b.get(2, 0)))
    .re;
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

fn sigma_max_2x2(a: &CMatrix) -> f64 {
    let g = a.adjoint().matmul(a);
    let (p, q, r) = (g.get(0, 0).re, g.get(0, 1), g.get(1, 1).re);
    let tr = p + r;
    let disc = ((p - r) * (p - r) + 4.0 * q.norm_sqr()).sqrt();
    ((tr + disc) / 2.0).sqrt()
}

fn entry() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(entry(), d * d)
        .prop_map(move |v| CMatrix::from_complex(d, v).unwrap())
}

proptest! {
    #[test]
    fn spectral_norm_matches_2x2_closed_form(a in matrix(2)) {
        let want = sigma_max_2x2(&a);
        let got = spectral_norm(&a).unwrap();
        prop_assert!((got - want).abs() <= 1e-8 * want.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn spectral_norm_matches_3x3_closed_form(a in matrix(3)) {
        let g = a.adjoint().matmul(&a);
        let want = hermitian_eigs_3x3(&g)[0].max(0.0).sqrt();
        let got = spectral_norm(&a).unwrap();
        prop_assert!((got - want).abs() <= 1e-8 * want.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn jacobi_singular_values_match_3x3_closed_form(a in matrix(3)) {
        let g = a.adjoint().matmul(&a);
        let want = hermitian_eigs_3x3(&g);
        let got = singular_values(&a);
        let top = want[0].sqrt();
        for (s, e) in got.iter().zip(want) {
            prop_assert!((s - e.max(0.0).sqrt()).abs() <= 1e-8 * top);
        }
    }
}

#[test]
fn spectral_norm_examples() {
    let d = CMatrix::diag_real(&[3.0, 1.0]).unwrap();
    assert!((spectral_norm(&d).unwrap() - 3.0).abs() < 1e-12);
    let n = CMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
    assert!((spectral_norm(&n).unwrap() - sigma_max_2x2(&n)).abs() < 1e-12);
    let u = superdyn::generators::random_unitary(4, &mut superdyn::generators::rng(1));
    assert!((spectral_norm(&u).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn clustered_leading_singular_values_converge() {
    // Leading singular values 1 + 3.6e-6 and 1 + 1.7e-6.
    let a = CMatrix::diag_real(&[-1.000003568564626, -1.0000016741342224, -0.9999993, -0.9999965])
        .unwrap();
    let got = spectral_norm(&a).unwrap();
    assert!((got - 1.000003568564626).abs() < 1e-12, "{got}");
    let b = CMatrix::diag(&[
        Complex64::new(-3.33e-16, -1.5598633495983453e-14),
        Complex64::new(2.22e-16, 1.5598633495983453e-14),
    ])
    .unwrap();
    assert!(spectral_norm(&b).is_ok());
}

#[test]
fn jordan_oracle_reproduces_frozen_minima() {
    let (op_n, op) = (1..=10_000u64)
        .map(|n| (n, common::jordan_operator_residual(n)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    assert_eq!(op_n, 1);
    assert!((op - (1.0 + 2f64.sqrt()) / 3.0).abs() < 1e-15);
    let vec = (1..=10_000u64)
        .map(common::jordan_vector_residual)
        .fold(f64::INFINITY, f64::min);
    assert!((vec - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn jordan_oracle_agrees_with_search_for_small_n() {
    use superdyn::witness::{operator_witness_search, SearchConfig};
    let j = superdyn::generators::jordan(Complex64::new(0.0, 1.0), 2).unwrap();
    let s = operator_witness_search(&j, &SearchConfig::new(50, 1e-9).all_times()).unwrap();
    for c in &s.certificates {
        let want = common::jordan_operator_residual(c.n);
        assert!((c.residual - want).abs() < 1e-10, "n = {}", c.n);
    }
}
