//! Decision procedure for finite-dimensional operators.
//!
//! Over ℂ or ℝ, super-recurrence, super-rigidity and uniform super-rigidity
//! coincide, and hold exactly when the matrix is diagonalizable with every
//! eigenvalue on a single circle `|z| = R`, `R > 0`. A positive answer comes
//! with a [`Certificate`] (radius, eigenbasis, canonical form); a negative one
//! with the first [`Obstruction`] found, checked in the fixed order modulus
//! mismatch, Jordan block, zero radius.
//!
//! All tolerances are relative. With `tol` and `s = ‖A‖_F`:
//! eigenvalues closer than `tol·s` are one spectral point, ranks of `A − λI`
//! are taken at `tol·s`, moduli agree when their spread is at most
//! `tol·max|λ|`, and a common radius at most `tol·s` counts as zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{
    check_tol, condition_number, eig, min_singular_value, numerical_rank, rank_threshold, CMatrix, PivotedQr,
    SpectrumReport,
};

/// Tolerances at or above this cannot tell points of a circle apart.
pub const MAX_TOLERANCE: f64 = 0.1;

/// Default relative tolerance for classification.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Super-recurrent, super-rigid and uniformly super-rigid.
    AllRigidityClasses,
    NotSuperRecurrent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Common eigenvalue modulus (mean over eigenvalues with multiplicity).
    pub radius: f64,
    /// 2-norm condition number of [`Certificate::eigenbasis`].
    pub eigenbasis_condition: f64,
    /// Columns are unit eigenvectors, ordered as the diagonal of the
    /// canonical form (complex classification).
    pub eigenbasis: CMatrix,
    /// Diagonal over ℂ; real block form over ℝ.
    pub canonical_form: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObstructionKind {
    /// Eigenvalues of smallest and largest modulus.
    ModulusMismatch { first: Complex64, second: Complex64 },
    JordanBlock {
        eigenvalue: Complex64,
        algebraic_mult: usize,
        geometric_mult: usize,
    },
    /// Every eigenvalue is (numerically) zero, yet the matrix is semisimple:
    /// the zero matrix.
    ZeroRadius { radius: f64 },
}

impl ObstructionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ObstructionKind::ModulusMismatch { .. } => "ModulusMismatch",
            ObstructionKind::JordanBlock { .. } => "JordanBlock",
            ObstructionKind::ZeroRadius { .. } => "ZeroRadius",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsClass {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub obstruction: Option<Obstruction>,
    pub spectrum: SpectrumReport,
    /// Smallest relative slack of the semisimplicity decision over all
    /// spectral points; negative at a Jordan block, near zero on borderline
    /// input.
    pub diagonalizability_margin: f64,
}

impl DynamicsClass {
    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::AllRigidityClasses
    }

    pub fn obstruction_name(&self) -> Option<&'static str> {
        self.obstruction.as_ref().map(|o| o.kind.name())
    }
}

fn check_classifier_tol(tol: f64) -> Result<()> {
    check_tol(tol)?;
    if tol >= MAX_TOLERANCE {
        return Err(Error::DegenerateTolerance { tol });
    }
    Ok(())
}

/// Separate tolerances for the spectral decisions (eigenvalue clustering,
/// rank of `A − λI`, modulus agreement) and for the zero-radius decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub spectral: f64,
    pub zero_radius: f64,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            spectral: tol,
            zero_radius: tol,
        }
    }
}

/// Complex classification. Real-tagged input is promoted.
pub fn classify_complex(a: &CMatrix, tol: f64) -> Result<DynamicsClass> {
    classify_complex_with(a, Tolerances::uniform(tol))
}

/// [`classify_complex`] with the zero-radius tolerance set apart.
pub fn classify_complex_with(a: &CMatrix, tols: Tolerances) -> Result<DynamicsClass> {
    check_classifier_tol(tols.zero_radius)?;
    let tol = tols.spectral;
    check_classifier_tol(tol)?;
    let spectrum = eig(a, tol)?;
    let thr = rank_threshold(a, tol);
    let d = a.dim();

    let mut margin = f64::INFINITY;
    for e in &spectrum.eigenvalues {
        let piv = PivotedQr::new(&a.shift(e.value));
        let p = piv.pivots()[d - e.algebraic_mult];
        let slack = if spectrum.scale > 0.0 {
            (thr - p) / spectrum.scale
        } else {
            0.0
        };
        margin = margin.min(slack);
    }

    let negative = |kind: ObstructionKind, detail: String, spectrum: SpectrumReport| DynamicsClass {
        verdict: Verdict::NotSuperRecurrent,
        certificate: None,
        obstruction: Some(Obstruction { kind, detail }),
        spectrum,
        diagonalizability_margin: margin,
    };

    // A numerically nilpotent matrix has 0 as its only eigenvalue; computed
    // eigenvalues of a conjugated nilpotent scatter on a circle of radius
    // ~ eps^(1/m)·‖A‖ and would otherwise pass as distinct.
    if spectrum.scale > 0.0 && kernel_obstruction(a, tols.zero_radius) {
        let unit = a.scale_real(1.0 / spectrum.scale);
        if unit.pow_direct(d as u64).frobenius_norm() <= tols.zero_radius {
            let nullity = d - numerical_rank(a, tols.zero_radius * spectrum.scale);
            if nullity >= d {
                let radius = spectrum.modulus_max;
                let detail = format!("numerically zero matrix (largest modulus {radius:.3e})");
                return Ok(negative(ObstructionKind::ZeroRadius { radius }, detail, spectrum));
            }
            let detail = format!(
                "numerically nilpotent: eigenvalue 0 has algebraic multiplicity {d} but only {nullity} independent eigenvectors"
            );
            let kind = ObstructionKind::JordanBlock {
                eigenvalue: Complex64::new(0.0, 0.0),
                algebraic_mult: d,
                geometric_mult: nullity,
            };
            return Ok(negative(kind, detail, spectrum));
        }
    }

    if spectrum.modulus_spread() > tol * spectrum.modulus_max {
        let by_mod = |x: &&crate::numkernel::Eigenvalue, y: &&crate::numkernel::Eigenvalue| {
            x.value.norm().total_cmp(&y.value.norm())
        };
        let lo = spectrum.eigenvalues.iter().min_by(by_mod).expect("non-empty");
        let hi = spectrum.eigenvalues.iter().max_by(by_mod).expect("non-empty");
        let detail = format!(
            "|{}| = {:.6e} and |{}| = {:.6e} differ by more than {:.1e} relative",
            fmt_c(lo.value),
            lo.value.norm(),
            fmt_c(hi.value),
            hi.value.norm(),
            tol
        );
        let kind = ObstructionKind::ModulusMismatch {
            first: lo.value,
            second: hi.value,
        };
        return Ok(negative(kind, detail, spectrum));
    }

    if let Some(e) = spectrum
        .eigenvalues
        .iter()
        .find(|e| e.geometric_mult < e.algebraic_mult)
    {
        let detail = format!(
            "eigenvalue {} has algebraic multiplicity {} but only {} independent eigenvectors",
            fmt_c(e.value),
            e.algebraic_mult,
            e.geometric_mult
        );
        let kind = ObstructionKind::JordanBlock {
            eigenvalue: e.value,
            algebraic_mult: e.algebraic_mult,
            geometric_mult: e.geometric_mult,
        };
        return Ok(negative(kind, detail, spectrum));
    }

    let radius = spectrum
        .eigenvalues
        .iter()
        .map(|e| e.value.norm() * e.algebraic_mult as f64)
        .sum::<f64>()
        / d as f64;
    if radius <= tols.zero_radius * spectrum.scale {
        let detail = format!("common modulus {radius:.3e} is zero at tolerance");
        return Ok(negative(ObstructionKind::ZeroRadius { radius }, detail, spectrum));
    }

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    let mut diagonal: Vec<Complex64> = Vec::with_capacity(d);
    for e in &spectrum.eigenvalues {
        let basis = PivotedQr::new(&a.shift(e.value)).null_space(thr);
        for v in basis.into_iter().take(e.algebraic_mult) {
            columns.push(v);
            diagonal.push(e.value);
        }
    }
    let mut vdata = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            vdata[i * d + j] = *z;
        }
    }
    let eigenbasis = CMatrix::from_complex(d, vdata)?;
    let eigenbasis_condition = condition_number(&eigenbasis);
    let certificate = Certificate {
        radius,
        eigenbasis_condition,
        eigenbasis,
        canonical_form: CMatrix::diag(&diagonal)?,
    };
    Ok(DynamicsClass {
        verdict: Verdict::AllRigidityClasses,
        certificate: Some(certificate),
        obstruction: None,
        spectrum,
        diagonalizability_margin: margin,
    })
}

/// Real classification: decided on the complexification, with the real block
/// canonical form on success.
pub fn classify_real(a: &CMatrix, tol: f64) -> Result<DynamicsClass> {
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    let mut class = classify_complex(a, tol)?;
    if let Some(cert) = class.certificate.as_mut() {
        cert.canonical_form = build_real_blocks(&class.spectrum)?;
    }
    Ok(class)
}

/// Dispatches on the field tag.
pub fn classify(a: &CMatrix, tol: f64) -> Result<DynamicsClass> {
    if a.is_real() {
        classify_real(a, tol)
    } else {
        classify_complex(a, tol)
    }
}

/// Real block-diagonal representative of a semisimple, conjugate-closed
/// spectrum on a circle: `±R` for real points, `[[a, b], [−b, a]]` (`b > 0`)
/// for each pair `a ± bi`. Pairs come first by argument, then real points in
/// decreasing order.
pub fn build_real_blocks(spectrum: &SpectrumReport) -> Result<CMatrix> {
    let radius = match spectrum.common_radius {
        Some(r) if r > 0.0 => r,
        _ => return Err(Error::NoCommonRadius),
    };
    if !spectrum.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let thr = spectrum.tol * spectrum.scale;
    let points = &spectrum.eigenvalues;
    let mut used = vec![false; points.len()];
    let mut pairs: Vec<(f64, f64, usize)> = Vec::new();
    let mut reals: Vec<(f64, usize)> = Vec::new();
    for (i, e) in points.iter().enumerate() {
        if used[i] {
            continue;
        }
        if e.value.im.abs() <= thr {
            used[i] = true;
            reals.push((e.value.re.signum() * radius, e.algebraic_mult));
            continue;
        }
        let target = e.value.conj();
        let partner = (0..points.len()).find(|&j| {
            j != i
                && !used[j]
                && points[j].algebraic_mult == e.algebraic_mult
                && (points[j].value - target).norm() <= 2.0 * thr.max(f64::EPSILON * radius)
        });
        let Some(j) = partner else {
            return Err(Error::NotConjugateClosed {
                re: e.value.re,
                im: e.value.im,
            });
        };
        used[i] = true;
        used[j] = true;
        let (up, down) = if e.value.im > 0.0 {
            (e.value, points[j].value)
        } else {
            (points[j].value, e.value)
        };
        pairs.push((0.5 * (up.re + down.re), 0.5 * (up.im - down.im), e.algebraic_mult));
    }
    pairs.sort_by(|x, y| x.1.atan2(x.0).total_cmp(&y.1.atan2(y.0)));
    reals.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut blocks = Vec::new();
    for (a, b, m) in pairs {
        for _ in 0..m {
            blocks.push(CMatrix::from_real_rows(&[[a, b], [-b, a]])?);
        }
    }
    for (r, m) in reals {
        for _ in 0..m {
            blocks.push(CMatrix::diag_real(&[r])?);
        }
    }
    CMatrix::block_diag(&blocks)
}

/// `true` iff `σ_min(A) ≤ tol·‖A‖_F`. A non-trivial kernel rules out every
/// rigidity class: kernel vectors are sent to zero by every positive power.
pub fn kernel_obstruction(a: &CMatrix, tol: f64) -> bool {
    min_singular_value(a) <= tol * a.frobenius_norm()
}

/// Radius of a circle holding the whole spectrum, if there is one with
/// positive radius.
pub fn spectral_circle_check(spectrum: &SpectrumReport, tol: f64) -> Option<f64> {
    if spectrum.eigenvalues.is_empty() {
        return None;
    }
    if spectrum.modulus_spread() > tol * spectrum.modulus_max {
        return None;
    }
    let r = 0.5 * (spectrum.modulus_min + spectrum.modulus_max);
    (r > tol * spectrum.scale && r > 0.0).then_some(r)
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}
