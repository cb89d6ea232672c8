use super::matrix::CMatrix;

/// `Aⁿ = exp(log_scale) · normalized` with `‖normalized‖_F = 1`.
///
/// An exactly zero power sets `zero` and `log_scale = −∞`; `normalized`
/// is then the zero matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPower {
    pub exponent: u64,
    pub log_scale: f64,
    pub normalized: CMatrix,
    pub zero: bool,
}

impl ScaledPower {
    /// `A⁰ = I`.
    pub fn identity(dim: usize) -> Self {
        let r = (dim as f64).sqrt();
        Self {
            exponent: 0,
            log_scale: r.ln(),
            normalized: CMatrix::identity(dim).scale_real(1.0 / r),
            zero: false,
        }
    }

    /// Normalizes `m`, folding its norm into the log scale.
    pub fn from_matrix(m: CMatrix, exponent: u64) -> Self {
        let n = m.frobenius_norm();
        if n == 0.0 {
            let d = m.dim();
            return Self::zero(d, exponent);
        }
        Self {
            exponent,
            log_scale: n.ln(),
            normalized: m.scale_real(1.0 / n),
            zero: false,
        }
    }

    fn zero(dim: usize, exponent: u64) -> Self {
        Self {
            exponent,
            log_scale: f64::NEG_INFINITY,
            normalized: CMatrix::zeros(dim),
            zero: true,
        }
    }

    /// Product of two scaled powers of the same base.
    pub fn compose(&self, other: &ScaledPower) -> Self {
        let exponent = self.exponent + other.exponent;
        if self.zero || other.zero {
            return Self::zero(self.normalized.dim(), exponent);
        }
        let mut p = Self::from_matrix(self.normalized.matmul(&other.normalized), exponent);
        if !p.zero {
            p.log_scale += self.log_scale + other.log_scale;
        }
        p
    }

    /// `exp(s)·normalized`; may overflow for large scales.
    pub fn reconstruct(&self) -> CMatrix {
        if self.zero {
            return CMatrix::zeros(self.normalized.dim());
        }
        let mut m = self.normalized.scale_real(self.log_scale.exp());
        if self.normalized.is_real() {
            m = m.demote_if_real();
        }
        m
    }
}

/// `Aⁿ` by binary exponentiation, renormalized after every product.
pub fn scaled_power(a: &CMatrix, n: u64) -> ScaledPower {
    if n == 0 {
        return ScaledPower::identity(a.dim());
    }
    let mut base = ScaledPower::from_matrix(a.clone(), 1);
    let mut result: Option<ScaledPower> = None;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.compose(&base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.compose(&base);
    }
    result.expect("n > 0")
}
