//! Eigenvalues by Householder reduction to Hessenberg form followed by
//! single-shift complex QR iteration with Wilkinson shifts, then clustering
//! and multiplicity counting.

use num_complex::Complex64;

use super::matrix::CMatrix;
use super::rank::{rank_threshold, PivotedQr};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One spectral point after clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub algebraic_mult: usize,
    pub geometric_mult: usize,
}

/// Clustered spectrum with multiplicities and modulus statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Eigenvalue>,
    pub modulus_min: f64,
    pub modulus_max: f64,
    /// Midpoint of the modulus range when the spread is within
    /// `tol · modulus_max`.
    pub common_radius: Option<f64>,
    /// Relative tolerance the report was computed at.
    pub tol: f64,
    /// `‖A‖_F` of the source matrix; absolute thresholds are `tol · scale`.
    pub scale: f64,
}

impl SpectrumReport {
    pub fn dim(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.algebraic_mult).sum()
    }

    pub fn modulus_spread(&self) -> f64 {
        self.modulus_max - self.modulus_min
    }

    /// Eigenvalues repeated by algebraic multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.algebraic_mult))
            .collect()
    }

    /// `true` when every spectral point has geometric = algebraic multiplicity.
    pub fn is_semisimple(&self) -> bool {
        self.eigenvalues
            .iter()
            .all(|e| e.geometric_mult == e.algebraic_mult)
    }
}

/// Raw eigenvalues (with repetition) from shifted QR.
///
/// The iteration budget is `100·d²` QR sweeps in total.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let d = a.dim();
    if !a.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    if d == 1 {
        return Ok(vec![a.get(0, 0)]);
    }
    let mut h = hessenberg(a);
    let budget = 100 * d * d;
    let norm = a.frobenius_norm();
    let eps = f64::EPSILON;
    let mut out = vec![ZERO; d];
    let mut hi = d - 1;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            out[0] = h[0][0];
            break;
        }
        // Find the start of the unreduced trailing block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let mut diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= eps * diag {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            // 2×2 block: closed form.
            let (l1, l2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            out[lo] = l1;
            out[hi] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= budget {
            return Err(Error::NonConvergence {
                routine: "eig",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // Exceptional shift against stagnation.
            h[hi][hi] + Complex64::new(0.75, 0.25) * h[hi][hi - 1].norm()
        } else {
            wilkinson(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let m = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let s = disc.sqrt();
    let l1 = m + s;
    let l2 = m - s;
    // Recover the smaller-magnitude root from the product to limit cancellation.
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() && l1 != ZERO {
        (l1, det / l1)
    } else if l2 != ZERO {
        (det / l2, l2)
    } else {
        (l1, l2)
    }
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form, returned as rows.
fn hessenberg(a: &CMatrix) -> Vec<Vec<Complex64>> {
    let d = a.dim();
    let mut h: Vec<Vec<Complex64>> = (0..d)
        .map(|i| (0..d).map(|j| a.get(i, j)).collect())
        .collect();
    for k in 0..d.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..d).map(|i| h[i][k]).collect();
        let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nx == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * nx;
        let mut v = x;
        v[0] -= alpha;
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        // H ← (I − 2vvᴴ) H
        for j in 0..d {
            let w: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * h[k + 1 + t][j])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                h[k + 1 + t][j] -= vt * w * 2.0;
            }
        }
        // H ← H (I − 2vvᴴ)
        for row in h.iter_mut() {
            let w: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| row[k + 1 + t] * vt)
                .sum();
            for (t, vt) in v.iter().enumerate() {
                row[k + 1 + t] -= w * vt.conj() * 2.0;
            }
        }
        h[k + 1][k] = alpha;
        for row in h.iter_mut().skip(k + 2) {
            row[k] = ZERO;
        }
    }
    h
}

/// Givens rotation `G = [[c, s], [−s̄, c]]` with `G·[a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// One explicit shifted QR step on the active window `[lo, hi]`.
fn qr_sweep(h: &mut [Vec<Complex64>], lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[i][i] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for j in k..=hi {
            let (x, y) = (h[k][j], h[k + 1][j]);
            h[k][j] = x * c + s * y;
            h[k + 1][j] = -s.conj() * x + y * c;
        }
        h[k + 1][k] = ZERO;
        rots.push((c, s));
    }
    for (off, &(c, s)) in rots.iter().enumerate() {
        let k = lo + off;
        for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * s.conj();
            row[k + 1] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[i][i] += mu;
    }
}

/// Groups eigenvalues whose distance is at most `radius` (single linkage).
/// Each group is represented by its mean.
pub fn cluster(values: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, s, m)| (s / m as f64, m))
        .collect();
    // Deterministic order: by argument, then modulus.
    out.sort_by(|a, b| {
        a.0.arg()
            .total_cmp(&b.0.arg())
            .then(a.0.norm().total_cmp(&b.0.norm()))
    });
    out
}

/// Clustered spectrum with multiplicities.
///
/// `tol` is relative: eigenvalues within `tol·max|λ|` are merged, rank
/// decisions on `A − λI` use the threshold `tol·‖A‖_F`, and the common radius
/// is reported when the modulus spread is at most `tol·max|λ|`.
pub fn eig(a: &CMatrix, tol: f64) -> Result<SpectrumReport> {
    check_tol(tol)?;
    let raw = eigenvalues(a)?;
    let scale = a.frobenius_norm();
    let thr = rank_threshold(a, tol);
    let rho = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clusters = cluster(&raw, tol * rho);
    let d = a.dim();
    let eigenvalues: Vec<Eigenvalue> = clusters
        .into_iter()
        .map(|(value, alg)| {
            let rank = PivotedQr::new(&a.shift(value)).rank(thr);
            let geo = (d - rank).clamp(1, alg);
            Eigenvalue {
                value,
                algebraic_mult: alg,
                geometric_mult: geo,
            }
        })
        .collect();
    Ok(summarize(eigenvalues, tol, scale))
}

pub(crate) fn summarize(eigenvalues: Vec<Eigenvalue>, tol: f64, scale: f64) -> SpectrumReport {
    let moduli = eigenvalues.iter().map(|e| e.value.norm());
    let modulus_min = moduli.clone().fold(f64::INFINITY, f64::min);
    let modulus_max = moduli.fold(0.0, f64::max);
    let common_radius = if modulus_max - modulus_min <= tol * modulus_max {
        Some(0.5 * (modulus_min + modulus_max))
    } else {
        None
    };
    SpectrumReport {
        eigenvalues,
        modulus_min,
        modulus_max,
        common_radius,
        tol,
        scale,
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_one_semisimple_point() {
        let r = eig(&CMatrix::identity(2), 1e-9).unwrap();
        assert_eq!(
            r.eigenvalues,
            vec![Eigenvalue {
                value: c(1.0, 0.0),
                algebraic_mult: 2,
                geometric_mult: 2
            }]
        );
        assert_eq!(r.common_radius, Some(1.0));
    }

    #[test]
    fn jordan_block_at_i() {
        let j = CMatrix::from_complex_rows(&[[c(0.0, 1.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
            .unwrap();
        let r = eig(&j, 1e-9).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        let e = &r.eigenvalues[0];
        assert!((e.value - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!((e.algebraic_mult, e.geometric_mult), (2, 1));
    }

    #[test]
    fn companion_of_z3_minus_1() {
        // z³ − 1: companion with last column (1, 0, 0).
        let comp =
            CMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let r = eig(&comp, 1e-9).unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
        let roots: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
            .collect();
        for root in roots {
            let hit = r
                .eigenvalues
                .iter()
                .find(|e| (e.value - root).norm() < 1e-12)
                .expect("root recovered");
            assert_eq!((hit.algebraic_mult, hit.geometric_mult), (1, 1));
        }
    }

    #[test]
    fn upper_triangular_diagonal_is_spectrum() {
        let a = CMatrix::from_complex_rows(&[
            [c(2.0, 0.0), c(1.0, 1.0), c(0.5, 0.0), c(3.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0), c(0.2, 0.0), c(0.0, 1.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 3.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.5)],
        ])
        .unwrap();
        let mut got = eigenvalues(&a).unwrap();
        let mut want = vec![c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 3.0), c(0.5, 0.5)];
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e3) as i64;
        got.sort_by_key(key);
        want.sort_by_key(key);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let r = eig(&CMatrix::zeros(3), 1e-9).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert_eq!(r.eigenvalues[0].algebraic_mult, 3);
        assert_eq!(r.eigenvalues[0].geometric_mult, 3);
        assert_eq!(r.common_radius, Some(0.0));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            eig(&CMatrix::identity(2), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(eig(&CMatrix::identity(2), f64::NAN).is_err());
    }

    #[test]
    fn clustering_is_single_linkage() {
        let v = [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(5.0, 0.0)];
        let g = cluster(&v, 0.6);
        assert_eq!(g.len(), 2);
        assert!(g.iter().any(|(z, m)| *m == 3 && (z - c(0.5, 0.0)).norm() < 1e-15));
    }
}
