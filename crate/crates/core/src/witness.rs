//! Explicit witnesses `(n, λ)` for the rigidity definitions.
//!
//! For each time `n` the scalar is the least-squares optimum, so the search
//! only scans `n = 1..=n_max`. Powers are carried in scaled form; the product
//! `λ·Aⁿ` is formed without ever materializing `Aⁿ`, so large `n` and
//! `|λ| ≠ 1` neither overflow nor underflow.
//!
//! The scan is split into fixed chunks of [`CHUNK`] consecutive times. Each
//! chunk starts from an independent binary power and then steps by one
//! factor of `A`; chunk results are merged in order. The chunk layout does
//! not depend on the thread count, so sequential and parallel runs produce
//! bit-identical certificates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{dot, scaled_power, spectral_norm, vec_norm, CMatrix, ScaledPower};

/// Times per work unit.
pub const CHUNK: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n_max: u64,
    /// Target residual; the search succeeds when some residual is at most this.
    pub epsilon: f64,
    /// Keep only record-setting times (strictly decreasing residuals).
    pub record_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_max: 10_000,
            epsilon: 1e-3,
            record_only: true,
        }
    }
}

impl SearchConfig {
    pub fn new(n_max: u64, epsilon: f64) -> Self {
        Self {
            n_max,
            epsilon,
            record_only: true,
        }
    }

    pub fn all_times(mut self) -> Self {
        self.record_only = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// How the time scan is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon over chunks; identical to `Sequential` without the `parallel`
    /// feature.
    #[default]
    Parallel,
}

/// Scalar `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledScalar {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledScalar {
    pub fn zero() -> Self {
        Self {
            mantissa: Complex64::new(0.0, 0.0),
            log_scale: 0.0,
        }
    }

    pub fn from_value(z: Complex64) -> Self {
        Self {
            mantissa: z,
            log_scale: 0.0,
        }
    }

    /// Plain value; infinite or zero when out of `f64` range.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    pub fn mul(&self, other: &ScaledScalar) -> Self {
        Self {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
    }

    /// `z^k` with the magnitude carried in log form.
    pub fn powi_of(z: Complex64, k: i64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        let r = z.norm();
        let u = z / r;
        Self {
            mantissa: powi_unit(u, k),
            log_scale: k as f64 * r.ln(),
        }
    }

    pub fn pow(&self, p: u32) -> Self {
        Self {
            mantissa: pow_u64(self.mantissa, p as u64),
            log_scale: self.log_scale * p as f64,
        }
    }
}

fn powi_unit(u: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        pow_u64(u, k as u64)
    } else {
        pow_u64(u.conj(), k.unsigned_abs())
    }
}

fn pow_u64(mut z: Complex64, mut k: u64) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            out *= z;
        }
        k >>= 1;
        if k > 0 {
            z *= z;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// `‖λAⁿ − I‖₂`.
    Operator,
    /// `‖λAⁿx − x‖₂` for the stored `x`.
    Vector(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCertificate {
    pub n: u64,
    pub lambda: ScaledScalar,
    pub residual: f64,
    pub norm_kind: NormKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSearch {
    /// Records (strictly increasing `n`, strictly decreasing residual) or
    /// every time, per [`SearchConfig::record_only`].
    pub certificates: Vec<WitnessCertificate>,
    /// Smallest residual seen (earliest time on ties).
    pub best: WitnessCertificate,
    /// First time with residual at most `epsilon`.
    pub first_success: Option<u64>,
    pub config: SearchConfig,
}

impl WitnessSearch {
    pub fn success(&self) -> bool {
        self.first_success.is_some()
    }
}

/// Least-squares scalar for `‖λ·Aⁿ − I‖_F`.
///
/// With `Aⁿ = e^s·N`: `λ = conj(tr N) / (‖N‖_F² e^s)`; real part only when
/// the matrix is real.
pub fn best_scalar(p: &ScaledPower) -> Result<ScaledScalar> {
    if p.zero {
        return Err(Error::ZeroPower);
    }
    Ok(operator_scalar(&p.normalized, p.log_scale))
}

fn operator_scalar(n: &CMatrix, log_scale: f64) -> ScaledScalar {
    let nf2 = n.frobenius_norm().powi(2);
    let mut m = n.trace().conj() / nf2;
    if n.is_real() {
        m.im = 0.0;
    }
    ScaledScalar {
        mantissa: m,
        log_scale: -log_scale,
    }
}

fn operator_residual(n: &CMatrix, mantissa: Complex64) -> Result<f64> {
    spectral_norm(&n.scale(mantissa).shift(Complex64::new(1.0, 0.0)))
}

/// Operator-norm witness search for uniform super-rigidity.
pub fn operator_witness_search(a: &CMatrix, cfg: &SearchConfig) -> Result<WitnessSearch> {
    operator_witness_search_with(a, cfg, Execution::default())
}

pub fn operator_witness_search_with(
    a: &CMatrix,
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<WitnessSearch> {
    cfg.validate()?;
    if a.frobenius_norm() == 0.0 {
        return Err(Error::ZeroPower);
    }
    let step = ScaledPower::from_matrix(a.clone(), 1);
    let chunk = |lo: u64, hi: u64| -> Result<ChunkResult> {
        let mut p = scaled_power(a, lo);
        let mut out = ChunkResult::new(cfg.record_only);
        for n in lo..=hi {
            if n > lo {
                p = p.compose(&step);
            }
            let (lambda, residual) = if p.zero {
                (ScaledScalar::zero(), 1.0)
            } else {
                let lam = operator_scalar(&p.normalized, p.log_scale);
                (lam, operator_residual(&p.normalized, lam.mantissa)?)
            };
            out.push(WitnessCertificate {
                n,
                lambda,
                residual,
                norm_kind: NormKind::Operator,
            });
        }
        Ok(out)
    };
    run_chunks(cfg, exec, chunk)
}

/// Vector witness search: `λ·Aⁿx ≈ x`.
pub fn vector_witness_search(
    a: &CMatrix,
    x: &[Complex64],
    cfg: &SearchConfig,
) -> Result<WitnessSearch> {
    vector_witness_search_with(a, x, cfg, Execution::default())
}

pub fn vector_witness_search_with(
    a: &CMatrix,
    x: &[Complex64],
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<WitnessSearch> {
    cfg.validate()?;
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    if vec_norm(x) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let real = a.is_real() && x.iter().all(|z| z.im == 0.0);
    let xnorm = vec_norm(x);
    let anorm = a.frobenius_norm();
    let a_unit = if anorm > 0.0 {
        a.scale_real(1.0 / anorm)
    } else {
        a.clone()
    };
    let xs: Vec<Complex64> = x.to_vec();
    let chunk = |lo: u64, hi: u64| -> Result<ChunkResult> {
        let mut out = ChunkResult::new(cfg.record_only);
        // Unit direction u and log length t of Aⁿx; None once Aⁿx = 0.
        let p = scaled_power(a, lo);
        let mut state: Option<(Vec<Complex64>, f64)> = if p.zero {
            None
        } else {
            let w = p.normalized.mat_vec(&xs);
            let nw = vec_norm(&w);
            (nw > 0.0).then(|| (w.iter().map(|z| z / nw).collect(), p.log_scale + nw.ln()))
        };
        for n in lo..=hi {
            if n > lo {
                state = state.and_then(|(u, t)| {
                    let w = a_unit.mat_vec(&u);
                    let nw = vec_norm(&w);
                    (nw > 0.0).then(|| (w.iter().map(|z| z / nw).collect(), t + anorm.ln() + nw.ln()))
                });
            }
            let (lambda, residual) = match &state {
                None => (ScaledScalar::zero(), xnorm),
                Some((u, t)) => {
                    let mut m = dot(u, &xs);
                    if real {
                        m.im = 0.0;
                    }
                    let r: Vec<Complex64> = u.iter().zip(&xs).map(|(ui, xi)| ui * m - xi).collect();
                    (
                        ScaledScalar {
                            mantissa: m,
                            log_scale: -t,
                        },
                        vec_norm(&r),
                    )
                }
            };
            out.push(WitnessCertificate {
                n,
                lambda,
                residual,
                norm_kind: NormKind::Vector(xs.clone()),
            });
        }
        Ok(out)
    };
    run_chunks(cfg, exec, chunk)
}

struct ChunkResult {
    record_only: bool,
    kept: Vec<WitnessCertificate>,
}

impl ChunkResult {
    fn new(record_only: bool) -> Self {
        Self {
            record_only,
            kept: Vec::new(),
        }
    }

    fn push(&mut self, c: WitnessCertificate) {
        if !self.record_only {
            self.kept.push(c);
            return;
        }
        match self.kept.last() {
            Some(last) if c.residual >= last.residual => {}
            _ => self.kept.push(c),
        }
    }
}

fn run_chunks<F>(cfg: &SearchConfig, exec: Execution, chunk: F) -> Result<WitnessSearch>
where
    F: Fn(u64, u64) -> Result<ChunkResult> + Sync,
{
    let n_chunks = cfg.n_max.div_ceil(CHUNK);
    let bounds = |k: u64| (1 + k * CHUNK, ((k + 1) * CHUNK).min(cfg.n_max));
    let results: Vec<Result<ChunkResult>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n_chunks)
                .into_par_iter()
                .map(|k| {
                    let (lo, hi) = bounds(k);
                    chunk(lo, hi)
                })
                .collect()
        }
        _ => (0..n_chunks)
            .map(|k| {
                let (lo, hi) = bounds(k);
                chunk(lo, hi)
            })
            .collect(),
    };

    let mut certificates: Vec<WitnessCertificate> = Vec::new();
    let mut best: Option<WitnessCertificate> = None;
    let mut first_success = None;
    for r in results {
        for c in r?.kept {
            if first_success.is_none() && c.residual <= cfg.epsilon {
                first_success = Some(c.n);
            }
            if best.as_ref().is_none_or(|b| c.residual < b.residual) {
                best = Some(c.clone());
            }
            if cfg.record_only {
                match certificates.last() {
                    Some(last) if c.residual >= last.residual => continue,
                    _ => {}
                }
            }
            certificates.push(c);
        }
    }
    Ok(WitnessSearch {
        certificates,
        best: best.expect("n_max >= 1"),
        first_success,
        config: cfg.clone(),
    })
}

/// Residual of `(n, λ)` recomputed from scratch via a fresh binary power.
pub fn recompute_residual(a: &CMatrix, cert: &WitnessCertificate) -> Result<f64> {
    let p = scaled_power(a, cert.n);
    let factor = if p.zero || cert.lambda.is_zero() {
        Complex64::new(0.0, 0.0)
    } else {
        cert.lambda.mantissa * (cert.lambda.log_scale + p.log_scale).exp()
    };
    match &cert.norm_kind {
        NormKind::Operator => spectral_norm(&p.normalized.scale(factor).shift(Complex64::new(1.0, 0.0))),
        NormKind::Vector(x) => {
            let y = p.normalized.mat_vec(x);
            let r: Vec<Complex64> = y.iter().zip(x).map(|(yi, xi)| yi * factor - xi).collect();
            Ok(vec_norm(&r))
        }
    }
}

/// `λ·Aⁿ` as a plain matrix (entries finite whenever the residual is).
pub fn scaled_product(a: &CMatrix, n: u64, lambda: &ScaledScalar) -> CMatrix {
    let p = scaled_power(a, n);
    if p.zero || lambda.is_zero() {
        return CMatrix::zeros(a.dim());
    }
    p.normalized
        .scale(lambda.mantissa * (lambda.log_scale + p.log_scale).exp())
}

/// Pigeonhole budget `⌈1/δ⌉^d`: some `n` at most this has all `d` phases
/// within `δ` of an integer.
///
/// With an eigenbasis of condition `κ`, the operator residual at that time is
/// at most `κ·min(2, √d)·2π·δ` for the least-squares scalar.
pub fn dirichlet_budget(d: u32, target_phase_error: f64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(target_phase_error > 0.0 && target_phase_error < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "target phase error must lie in (0, 1/2), got {target_phase_error}"
        )));
    }
    let q = 1.0 / target_phase_error;
    // Snap values within rounding of an integer before taking the ceiling.
    let q = if (q - q.round()).abs() <= 1e-9 * q {
        q.round()
    } else {
        q.ceil()
    };
    if q > u64::MAX as f64 {
        return Err(Error::BudgetOverflow {
            base: u64::MAX,
            dim: d,
        });
    }
    let base = q as u64;
    base.checked_pow(d)
        .filter(|&n| n <= i64::MAX as u64)
        .ok_or(Error::BudgetOverflow { base, dim: d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{backward_shift, cis_turns, diag_circle};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn best_scalar_examples() {
        let id = CMatrix::identity(2);
        let l = best_scalar(&scaled_power(&id, 5)).unwrap();
        assert!((l.value() - c(1.0, 0.0)).norm() < 1e-15);

        let two = id.scale_real(2.0);
        let l = best_scalar(&scaled_power(&two, 1)).unwrap();
        assert!((l.value() - c(0.5, 0.0)).norm() < 1e-15);

        let refl = CMatrix::diag_real(&[1.0, -1.0]).unwrap();
        let p = scaled_power(&refl, 1);
        let l = best_scalar(&p).unwrap();
        assert!(l.value().norm() < 1e-15);
        let r = (&p.reconstruct().scale(l.value()) - &id).frobenius_norm();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn best_scalar_rejects_zero_power() {
        let n = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(best_scalar(&scaled_power(&n, 3)), Err(Error::ZeroPower));
    }

    #[test]
    fn minus_identity_has_exact_witnesses() {
        let a = CMatrix::identity(2).scale_real(-1.0);
        let s = operator_witness_search(&a, &SearchConfig::new(10, 1e-9).all_times()).unwrap();
        assert_eq!(s.first_success, Some(1));
        let c1 = &s.certificates[0];
        assert!((c1.lambda.value() - c(-1.0, 0.0)).norm() < 1e-15);
        let c2 = &s.certificates[1];
        assert_eq!(c2.n, 2);
        assert!((c2.lambda.value() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(c2.residual < 1e-15);
    }

    #[test]
    fn one_dimensional_scalar_inverts_in_one_step() {
        let a = CMatrix::diag(&[c(0.0, 2.0)]).unwrap();
        let s = operator_witness_search(&a, &SearchConfig::new(5, 1e-12)).unwrap();
        assert_eq!(s.first_success, Some(1));
        let l = s.certificates[0].lambda.value();
        assert!((l - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn cube_root_and_minus_one_first_exact_at_six() {
        let a = diag_circle(1.0, &[1.0 / 3.0, 0.5]).unwrap();
        let s = operator_witness_search(&a, &SearchConfig::new(10, 1e-12).all_times()).unwrap();
        for cert in &s.certificates {
            if cert.n < 6 {
                assert!(cert.residual > 0.1, "n = {}", cert.n);
            }
        }
        assert_eq!(s.first_success, Some(6));
        assert!((s.certificates[5].lambda.value() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn records_are_monotone() {
        let a = diag_circle(1.3, &[0.1234567, 0.7654321]).unwrap();
        let s = operator_witness_search(&a, &SearchConfig::new(3000, 1e-3)).unwrap();
        for w in s.certificates.windows(2) {
            assert!(w[0].n < w[1].n);
            assert!(w[0].residual > w[1].residual);
        }
        assert_eq!(s.best, *s.certificates.last().unwrap());
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let a = diag_circle(0.9, &[0.31, 0.0777, 0.5123]).unwrap();
        let cfg = SearchConfig::new(1500, 1e-2).all_times();
        let s1 = operator_witness_search_with(&a, &cfg, Execution::Sequential).unwrap();
        let s2 = operator_witness_search_with(&a, &cfg, Execution::Parallel).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn eigenvector_is_a_one_step_vector_witness() {
        let mu = c(0.6, 0.8) * 1.7;
        let a = CMatrix::from_complex_rows(&[[mu, c(1.0, 0.0)], [c(0.0, 0.0), c(0.2, 0.0)]]).unwrap();
        let x = [c(1.0, 0.0), c(0.0, 0.0)];
        let s = vector_witness_search(&a, &x, &SearchConfig::new(4, 1e-12)).unwrap();
        assert_eq!(s.first_success, Some(1));
        assert!((s.certificates[0].lambda.value() - mu.inv()).norm() < 1e-14);
    }

    #[test]
    fn backward_shift_never_returns_e1() {
        let b = backward_shift(&[1.0, 2.0, 3.0]).unwrap();
        let e1 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let s = vector_witness_search(&b, &e1, &SearchConfig::new(50, 1e-3).all_times()).unwrap();
        assert!(!s.success());
        assert!(s.certificates.iter().all(|c| c.residual == 1.0));
    }

    #[test]
    fn vector_witness_rejects_zero_vector() {
        let a = CMatrix::identity(2);
        let z = [c(0.0, 0.0); 2];
        assert_eq!(
            vector_witness_search(&a, &z, &SearchConfig::default()),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn denominators_three_and_five_meet_at_fifteen() {
        let a = CMatrix::diag(&[cis_turns(1.0, 1.0 / 3.0), cis_turns(1.0, 2.0 / 5.0)]).unwrap();
        let x = [c(0.3, -0.7), c(1.1, 0.4)];
        let s = vector_witness_search(&a, &x, &SearchConfig::new(30, 1e-9).all_times()).unwrap();
        assert_eq!(s.first_success, Some(15));
        assert!(s.certificates[14].residual < 1e-12);
    }

    #[test]
    fn residuals_recompute() {
        let a = diag_circle(2.5, &[0.13, 0.62]).unwrap();
        let s = operator_witness_search(&a, &SearchConfig::new(2000, 1e-3)).unwrap();
        for cert in &s.certificates {
            let r = recompute_residual(&a, cert).unwrap();
            assert!((r - cert.residual).abs() < 1e-10, "n = {}", cert.n);
        }
    }

    #[test]
    fn budget_formula() {
        assert_eq!(dirichlet_budget(1, 0.01).unwrap(), 100);
        assert_eq!(dirichlet_budget(2, 0.05).unwrap(), 400);
        assert_eq!(dirichlet_budget(3, 0.3).unwrap(), 64);
        assert!(matches!(
            dirichlet_budget(64, 0.01),
            Err(Error::BudgetOverflow { .. })
        ));
        assert!(dirichlet_budget(2, 0.5).is_err());
        assert!(dirichlet_budget(2, 0.0).is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let a = CMatrix::identity(2);
        assert!(operator_witness_search(&a, &SearchConfig::new(0, 0.1)).is_err());
        assert!(operator_witness_search(&a, &SearchConfig::new(5, 0.0)).is_err());
        assert_eq!(
            operator_witness_search(&CMatrix::zeros(2), &SearchConfig::default()),
            Err(Error::ZeroPower)
        );
    }
}
