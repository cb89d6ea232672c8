//! Numerical rank and null spaces from column-pivoted Householder QR.

use num_complex::Complex64;

use super::matrix::{dot, vec_norm, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `A·P = Q·R` with `|R_kk|` non-increasing.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// Columns of `R` (upper triangle meaningful), in pivoted order.
    r_cols: Vec<Vec<Complex64>>,
    /// `perm[k]` is the original column placed at position `k`.
    perm: Vec<usize>,
    /// `|R_kk|`.
    pivots: Vec<f64>,
}

impl PivotedQr {
    pub fn new(a: &CMatrix) -> Self {
        let d = a.dim();
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|j| (0..d).map(|i| a.get(i, j)).collect())
            .collect();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut pivots = Vec::with_capacity(d);
        for k in 0..d {
            // Remaining column norms are recomputed exactly; d is small.
            let (best, _) = (k..d)
                .map(|j| (j, vec_norm(&cols[j][k..])))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            cols.swap(k, best);
            perm.swap(k, best);

            let x = &cols[k][k..];
            let nx = vec_norm(x);
            if nx == 0.0 {
                pivots.push(0.0);
                continue;
            }
            let phase = if x[0] == ZERO {
                Complex64::new(1.0, 0.0)
            } else {
                x[0] / x[0].norm()
            };
            let alpha = -phase * nx;
            let mut v: Vec<Complex64> = x.to_vec();
            v[0] -= alpha;
            let nv = vec_norm(&v);
            if nv > 0.0 {
                v.iter_mut().for_each(|z| *z /= nv);
                for col in cols.iter_mut().skip(k) {
                    let w = dot(&v, &col[k..]);
                    for (c, vi) in col[k..].iter_mut().zip(&v) {
                        *c -= *vi * (w * 2.0);
                    }
                }
            }
            cols[k][k] = alpha;
            for z in cols[k][k + 1..].iter_mut() {
                *z = ZERO;
            }
            pivots.push(nx);
        }
        Self {
            r_cols: cols,
            perm,
            pivots,
        }
    }

    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    /// Number of leading pivots strictly above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.pivots.iter().take_while(|&&p| p > threshold).count()
    }

    /// Orthonormal basis of the numerical null space at `threshold`.
    pub fn null_space(&self, threshold: f64) -> Vec<Vec<Complex64>> {
        let d = self.perm.len();
        let r = self.rank(threshold);
        let mut basis = Vec::with_capacity(d - r);
        for j in r..d {
            // Solve R11 y = -R12 e_j by back substitution.
            let mut y = vec![ZERO; r];
            for i in (0..r).rev() {
                let mut s = -self.r_cols[j][i];
                for (k, yk) in y.iter().enumerate().skip(i + 1) {
                    s -= self.r_cols[k][i] * yk;
                }
                y[i] = s / self.r_cols[i][i];
            }
            let mut x = vec![ZERO; d];
            for (k, yk) in y.into_iter().enumerate() {
                x[self.perm[k]] = yk;
            }
            x[self.perm[j]] = Complex64::new(1.0, 0.0);
            basis.push(x);
        }
        orthonormalize(&mut basis);
        basis
    }
}

/// Modified Gram–Schmidt, two passes.
pub(crate) fn orthonormalize(vs: &mut [Vec<Complex64>]) {
    for _ in 0..2 {
        for i in 0..vs.len() {
            let (done, rest) = vs.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let p = dot(u, v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ui * p;
                }
            }
            let n = vec_norm(v);
            if n > 0.0 {
                v.iter_mut().for_each(|z| *z /= n);
            }
        }
    }
}

/// Threshold used for every rank decision on `A − λI`: `tol · ‖A‖_F`.
pub fn rank_threshold(a: &CMatrix, tol: f64) -> f64 {
    tol * a.frobenius_norm()
}

/// `d − rank(A − λI)` with rank taken at `tol · ‖A‖_F`.
pub fn geometric_multiplicity(a: &CMatrix, lambda: Complex64, tol: f64) -> usize {
    let thr = rank_threshold(a, tol);
    a.dim() - PivotedQr::new(&a.shift(lambda)).rank(thr)
}

/// Numerical rank of `a` at absolute threshold.
pub fn numerical_rank(a: &CMatrix, threshold: f64) -> usize {
    PivotedQr::new(a).rank(threshold)
}
