//! Structural laws of the rigidity classes as executable checks.
//!
//! Every check returns a [`LawReport`] with `passed ⇔ margin ≥ 0`. The
//! inputs each margin was computed from are kept in
//! [`LawReport::measurements`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::classifier::{
    classify_complex, classify_complex_with, kernel_obstruction, DynamicsClass, Tolerances,
    DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::generators::{self, conditioned};
use crate::numkernel::{
    condition_number, eig, min_singular_value, scaled_power, spectral_norm, CMatrix,
};
use crate::witness::{
    operator_witness_search, recompute_residual, scaled_product, NormKind, ScaledScalar,
    SearchConfig, WitnessCertificate,
};

/// Slack added to the transported residual bounds.
pub const TRANSPORT_SLACK: f64 = 1e-9;
/// Relative deviation allowed by the exact scaling transfer.
pub const SCALING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawId {
    Similarity,
    PowerVerdict,
    PowerResidualBound,
    ScalingExact,
    AdjointSpectrum,
    SpectralCircle,
    Invertibility,
    KernelObstruction,
}

impl LawId {
    pub const ALL: [LawId; 8] = [
        LawId::Similarity,
        LawId::PowerVerdict,
        LawId::PowerResidualBound,
        LawId::ScalingExact,
        LawId::AdjointSpectrum,
        LawId::SpectralCircle,
        LawId::Invertibility,
        LawId::KernelObstruction,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LawId::Similarity => "Similarity",
            LawId::PowerVerdict => "PowerVerdict",
            LawId::PowerResidualBound => "PowerResidualBound",
            LawId::ScalingExact => "ScalingExact",
            LawId::AdjointSpectrum => "AdjointSpectrum",
            LawId::SpectralCircle => "SpectralCircle",
            LawId::Invertibility => "Invertibility",
            LawId::KernelObstruction => "KernelObstruction",
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = Error;

    /// Accepts the canonical name in any case, with or without `-`/`_`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        LawId::ALL
            .into_iter()
            .find(|l| l.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown law `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub law: LawId,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
    pub measurements: Vec<(&'static str, f64)>,
}

impl LawReport {
    fn new(law: LawId, margin: f64, detail: String, measurements: Vec<(&'static str, f64)>) -> Self {
        Self {
            law,
            passed: margin >= 0.0,
            margin,
            detail,
            measurements,
        }
    }

    pub fn measurement(&self, key: &str) -> Option<f64> {
        self.measurements
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
    }
}

/// Relative distance of the modulus spread from the equal-modulus threshold.
fn spread_distance(k: &DynamicsClass, tol: f64) -> f64 {
    let s = &k.spectrum;
    if s.modulus_max == 0.0 {
        return tol;
    }
    (tol * s.modulus_max - s.modulus_spread()).abs() / s.modulus_max
}

fn verdict_law(
    law: LawId,
    left: &DynamicsClass,
    right: &DynamicsClass,
    right_tol: f64,
    what: &str,
) -> LawReport {
    let agree = left.verdict == right.verdict;
    let dist = spread_distance(right, right_tol);
    let margin = if agree { dist } else { -dist.max(f64::MIN_POSITIVE) };
    let detail = format!(
        "{what}: {:?} ({}) vs {:?} ({})",
        left.verdict,
        left.obstruction_name().unwrap_or("certificate"),
        right.verdict,
        right.obstruction_name().unwrap_or("certificate"),
    );
    LawReport::new(
        law,
        margin,
        detail,
        vec![
            ("spread", right.spectrum.modulus_spread()),
            ("modulus_max", right.spectrum.modulus_max),
            ("tol", right_tol),
            ("verdicts_agree", if agree { 1.0 } else { 0.0 }),
        ],
    )
}

/// Verdicts of `A` and `P·A·P⁻¹` agree. The spectral decisions on the
/// conjugate are taken at `tol·cond(P)²`; its zero-radius decision stays at
/// `tol`, since `‖P·A·P⁻¹‖_F` already grows with `cond(P)`.
pub fn check_similarity(a: &CMatrix, p: &CMatrix, tol: f64) -> Result<LawReport> {
    let (b, cond) = conjugate_checked(a, p, tol)?;
    let tol_b = relaxed_tol(tol, cond);
    let ka = classify_complex(a, tol)?;
    let kb = classify_complex_with(
        &b,
        Tolerances {
            spectral: tol_b,
            zero_radius: tol,
        },
    )?;
    let mut r = verdict_law(LawId::Similarity, &ka, &kb, tol_b, "A vs PAP⁻¹");
    r.measurements.push(("cond_p", cond));
    Ok(r)
}

/// `tol·cond²`, capped below the classifier's coarsest admissible tolerance.
pub fn relaxed_tol(tol: f64, cond: f64) -> f64 {
    (tol * cond * cond).min(0.5 * crate::classifier::MAX_TOLERANCE)
}

fn conjugate_checked(a: &CMatrix, p: &CMatrix, tol: f64) -> Result<(CMatrix, f64)> {
    if a.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: p.dim(),
        });
    }
    if min_singular_value(p) <= tol * p.frobenius_norm() {
        return Err(Error::Singular);
    }
    let p_inv = p.inverse()?;
    Ok((generators::conjugate(a, p, &p_inv), condition_number(p)))
}

/// Witnesses of `A` transported to `P·A·P⁻¹` keep their residual up to the
/// factor `cond(P)`.
///
/// The transported residual is that of the exact conjugate,
/// `‖P·(λAⁿ)·P⁻¹ − I‖₂`. Powering the rounded product `fl(P·A·P⁻¹)` instead
/// adds an error of order `n·eps·κ²` for an eigenbasis condition `κ`, which
/// is a property of that rounded matrix, not of the transport.
pub fn check_witness_transport(
    a: &CMatrix,
    p: &CMatrix,
    cfg: &SearchConfig,
    tol: f64,
) -> Result<LawReport> {
    let (_, cond) = conjugate_checked(a, p, tol)?;
    let p_inv = p.inverse()?;
    let search = operator_witness_search(a, cfg)?;
    let mut margin = f64::INFINITY;
    let mut worst_ratio: f64 = 0.0;
    for cert in &search.certificates {
        let rb = transported_residual(a, p, &p_inv, cert)?;
        let ra = cert.residual;
        margin = margin.min(cond * ra + TRANSPORT_SLACK - rb);
        if ra > 0.0 {
            worst_ratio = worst_ratio.max(rb / ra);
        }
    }
    Ok(LawReport::new(
        LawId::Similarity,
        margin,
        format!(
            "witness transport over {} certificates, worst residual ratio {:.3} ≤ cond(P) = {:.3}",
            search.certificates.len(),
            worst_ratio,
            cond
        ),
        vec![
            ("cond_p", cond),
            ("worst_ratio", worst_ratio),
            ("certificates", search.certificates.len() as f64),
        ],
    ))
}

/// `‖P·(λAⁿ)·P⁻¹ − I‖₂` for an operator certificate of `A`.
pub fn transported_residual(
    a: &CMatrix,
    p: &CMatrix,
    p_inv: &CMatrix,
    cert: &WitnessCertificate,
) -> Result<f64> {
    let k = scaled_product(a, cert.n, &cert.lambda);
    spectral_norm(&generators::conjugate(&k, p, p_inv).shift(Complex64::new(1.0, 0.0)))
}

/// Verdicts of `A` and `Aᵖ` agree, and every witness `(n, λ, r)` of `A`
/// yields `‖λᵖA^{pn} − I‖ ≤ (Σ_{i<p} Mⁱ)·r` with `M = ‖λAⁿ‖₂`.
pub fn check_power_laws(
    a: &CMatrix,
    p: u32,
    cfg: &SearchConfig,
    tol: f64,
) -> Result<(LawReport, LawReport)> {
    if !(2..=5).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "power must lie in 2..=5, got {p}"
        )));
    }
    let ap = a.pow_direct(p as u64);
    let ka = classify_complex(a, tol)?;
    let kp = classify_complex(&ap, tol)?;
    let verdict = verdict_law(LawId::PowerVerdict, &ka, &kp, tol, &format!("A vs A^{p}"));

    let search = operator_witness_search(a, cfg)?;
    let mut margin = f64::INFINITY;
    let mut worst_lhs: f64 = 0.0;
    for cert in &search.certificates {
        let (lhs, bound) = power_transfer(a, cert, p)?;
        worst_lhs = worst_lhs.max(lhs);
        margin = margin.min(bound + TRANSPORT_SLACK - lhs);
    }
    let bound = LawReport::new(
        LawId::PowerResidualBound,
        margin,
        format!(
            "p = {p}: telescoping bound holds over {} certificates (largest transferred residual {:.3e})",
            search.certificates.len(),
            worst_lhs
        ),
        vec![
            ("p", p as f64),
            ("certificates", search.certificates.len() as f64),
            ("worst_lhs", worst_lhs),
        ],
    );
    Ok((verdict, bound))
}

/// `(‖λᵖA^{pn} − I‖₂, (Σ_{i<p} Mⁱ)·r)` for one operator certificate.
///
/// The left side is evaluated from a fresh power `A^{pn}`, not from `(λAⁿ)ᵖ`.
pub fn power_transfer(a: &CMatrix, cert: &WitnessCertificate, p: u32) -> Result<(f64, f64)> {
    let m = spectral_norm(&scaled_product(a, cert.n, &cert.lambda))?;
    let r = recompute_residual(a, cert)?;
    let factor: f64 = (0..p).map(|i| m.powi(i as i32)).sum();
    let transferred = WitnessCertificate {
        n: cert.n * p as u64,
        lambda: cert.lambda.pow(p),
        residual: f64::NAN,
        norm_kind: NormKind::Operator,
    };
    let lhs = recompute_residual(a, &transferred)?;
    Ok((lhs, factor * r))
}

/// Witness `(n, λ)` of `A` becomes `(n, λ·c⁻ⁿ)` for `cA` with the same residual.
pub fn check_scaling_exact(a: &CMatrix, c: Complex64, cfg: &SearchConfig) -> Result<LawReport> {
    if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter("scaling factor must be non-zero".into()));
    }
    let ca = a.scale(c);
    let search = operator_witness_search(a, cfg)?;
    let mut margin = f64::INFINITY;
    let mut worst: f64 = 0.0;
    for cert in &search.certificates {
        let (r, r_c) = scaling_transfer(a, &ca, c, cert)?;
        let dev = (r - r_c).abs();
        worst = worst.max(dev);
        margin = margin.min(SCALING_TOL * (1.0 + r) - dev);
    }
    Ok(LawReport::new(
        LawId::ScalingExact,
        margin,
        format!(
            "c = {:.4}{:+.4}i: max residual deviation {:.2e} over {} certificates",
            c.re,
            c.im,
            worst,
            search.certificates.len()
        ),
        vec![
            ("max_deviation", worst),
            ("certificates", search.certificates.len() as f64),
        ],
    ))
}

/// `(residual for A, residual of the transferred witness for cA)`, both
/// recomputed from fresh powers.
pub fn scaling_transfer(
    a: &CMatrix,
    ca: &CMatrix,
    c: Complex64,
    cert: &WitnessCertificate,
) -> Result<(f64, f64)> {
    let r = recompute_residual(a, cert)?;
    let moved = WitnessCertificate {
        n: cert.n,
        lambda: cert.lambda.mul(&ScaledScalar::powi_of(c, -(cert.n as i64))),
        residual: f64::NAN,
        norm_kind: cert.norm_kind.clone(),
    };
    Ok((r, recompute_residual(ca, &moved)?))
}

/// Moduli of `σ(A)` and `σ(Aᴴ)`: on a common circle when `A` is positive,
/// equal as multisets otherwise.
///
/// In finite dimension this is automatic; it guards the eigensolver.
pub fn check_adjoint_spectrum(a: &CMatrix, tol: f64) -> Result<LawReport> {
    let k = classify_complex(a, tol)?;
    let sa = eig(a, tol)?;
    let sh = eig(&a.adjoint(), tol)?;
    let mut ma: Vec<f64> = sa.expanded().iter().map(|z| z.norm()).collect();
    let mut mh: Vec<f64> = sh.expanded().iter().map(|z| z.norm()).collect();
    ma.sort_by(f64::total_cmp);
    mh.sort_by(f64::total_cmp);
    let multiset_dev = ma
        .iter()
        .zip(&mh)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let all = ma.iter().chain(&mh);
    let lo = all.clone().cloned().fold(f64::INFINITY, f64::min);
    let hi = all.cloned().fold(0.0, f64::max);
    let union_spread = hi - lo;
    let (margin, detail) = if k.is_positive() {
        (
            tol * hi - union_spread,
            format!("union of moduli of σ(A) and σ(Aᴴ) has spread {union_spread:.2e} (eigensolver tripwire)"),
        )
    } else {
        (
            tol * sa.scale.max(f64::MIN_POSITIVE) - multiset_dev,
            format!("moduli multisets of A and Aᴴ differ by {multiset_dev:.2e} (eigensolver tripwire)"),
        )
    };
    Ok(LawReport::new(
        LawId::AdjointSpectrum,
        margin,
        detail,
        vec![
            ("union_spread", union_spread),
            ("multiset_deviation", multiset_dev),
            ("tol", tol),
        ],
    ))
}

/// Positive verdict ⇒ the whole spectrum lies on `|z| = R`.
pub fn check_spectral_circle(a: &CMatrix, tol: f64) -> Result<LawReport> {
    let k = classify_complex(a, tol)?;
    let spread = k.spectrum.modulus_spread();
    match &k.certificate {
        Some(cert) => Ok(LawReport::new(
            LawId::SpectralCircle,
            tol * cert.radius - spread,
            format!("spectrum on |z| = {:.6} with modulus spread {spread:.2e}", cert.radius),
            vec![("radius", cert.radius), ("spread", spread), ("tol", tol)],
        )),
        None => Ok(LawReport::new(
            LawId::SpectralCircle,
            0.0,
            "negative verdict; nothing to check".into(),
            vec![("spread", spread)],
        )),
    }
}

/// Positive verdict ⇒ `σ_min(A) ≥ R / (2κ)`.
pub fn check_invertibility(a: &CMatrix, tol: f64) -> Result<LawReport> {
    let k = classify_complex(a, tol)?;
    let smin = min_singular_value(a);
    match &k.certificate {
        Some(cert) => {
            let floor = cert.radius / (2.0 * cert.eigenbasis_condition);
            Ok(LawReport::new(
                LawId::Invertibility,
                smin - floor,
                format!("σ_min = {smin:.4e} ≥ R/(2κ) = {floor:.4e}"),
                vec![
                    ("sigma_min", smin),
                    ("radius", cert.radius),
                    ("kappa", cert.eigenbasis_condition),
                ],
            ))
        }
        None => Ok(LawReport::new(
            LawId::Invertibility,
            0.0,
            "negative verdict; nothing to check".into(),
            vec![("sigma_min", smin)],
        )),
    }
}

/// A numerically non-trivial kernel forces a negative verdict.
pub fn check_kernel_obstruction(a: &CMatrix, tol: f64) -> Result<LawReport> {
    let k = classify_complex(a, tol)?;
    let smin = min_singular_value(a);
    let thr = tol * a.frobenius_norm();
    let kernel = kernel_obstruction(a, tol);
    let (margin, detail) = if k.is_positive() {
        (
            smin - thr,
            format!("positive verdict with σ_min = {smin:.3e} above kernel threshold {thr:.3e}"),
        )
    } else {
        (
            0.0,
            format!(
                "negative verdict ({}), kernel {}",
                k.obstruction_name().unwrap_or("?"),
                if kernel { "present" } else { "absent" }
            ),
        )
    };
    Ok(LawReport::new(
        LawId::KernelObstruction,
        margin,
        detail,
        vec![("sigma_min", smin), ("threshold", thr)],
    ))
}

/// Configuration of a full law run on one matrix.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub laws: Vec<LawId>,
    pub tol: f64,
    pub search: SearchConfig,
    pub seed: u64,
    /// Random companions per similarity / scaling law.
    pub samples: usize,
    /// Upper bound for the condition number of similarity companions.
    pub max_cond: f64,
    pub powers: Vec<u32>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            laws: LawId::ALL.to_vec(),
            tol: DEFAULT_TOL,
            search: SearchConfig::new(1000, 1e-3),
            seed: 0,
            samples: 4,
            max_cond: 10.0,
            powers: vec![2, 3],
        }
    }
}

/// Runs the selected laws; similarity and scaling use seeded companions.
pub fn run_suite(a: &CMatrix, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let mut rng = generators::rng(cfg.seed);
    let mut out = Vec::new();
    let real = a.is_real();
    for law in &cfg.laws {
        match law {
            LawId::Similarity => {
                for _ in 0..cfg.samples {
                    let cond = rng.gen_range(1.0..=cfg.max_cond);
                    let (p, _) = conditioned(a.dim(), cond, real, &mut rng)?;
                    out.push(check_similarity(a, &p, cfg.tol)?);
                    out.push(check_witness_transport(a, &p, &cfg.search, cfg.tol)?);
                }
            }
            LawId::PowerVerdict | LawId::PowerResidualBound => {
                // Both reports come from one call; emit them once.
                if *law == LawId::PowerResidualBound && cfg.laws.contains(&LawId::PowerVerdict) {
                    continue;
                }
                for &p in &cfg.powers {
                    let (v, b) = check_power_laws(a, p, &cfg.search, cfg.tol)?;
                    if cfg.laws.contains(&LawId::PowerVerdict) {
                        out.push(v);
                    }
                    if cfg.laws.contains(&LawId::PowerResidualBound) {
                        out.push(b);
                    }
                }
            }
            LawId::ScalingExact => {
                for _ in 0..cfg.samples {
                    let r = rng.gen_range(0.5..2.0);
                    let c = if real {
                        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        Complex64::new(sign * r, 0.0)
                    } else {
                        Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
                    };
                    out.push(check_scaling_exact(a, c, &cfg.search)?);
                }
            }
            LawId::AdjointSpectrum => out.push(check_adjoint_spectrum(a, cfg.tol)?),
            LawId::SpectralCircle => out.push(check_spectral_circle(a, cfg.tol)?),
            LawId::Invertibility => out.push(check_invertibility(a, cfg.tol)?),
            LawId::KernelObstruction => out.push(check_kernel_obstruction(a, cfg.tol)?),
        }
    }
    Ok(out)
}

/// Operator residual of `(n, λ)` for `A`, via a fresh power. Convenience for
/// callers holding a plain scalar.
pub fn residual_at(a: &CMatrix, n: u64, lambda: Complex64) -> Result<f64> {
    let p = scaled_power(a, n);
    if p.zero {
        return Ok(1.0);
    }
    let cert = WitnessCertificate {
        n,
        lambda: ScaledScalar::from_value(lambda),
        residual: f64::NAN,
        norm_kind: NormKind::Operator,
    };
    recompute_residual(a, &cert)
}
