use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Scalar field a matrix is declared over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

/// Dense square matrix over ℂ, row-major.
///
/// A `Real`-tagged matrix stores complex entries whose imaginary parts are
/// exactly zero. Public constructors reject non-finite entries; values are
/// never mutated after construction.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    field: Field,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, field: Field, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::Shape {
                dim,
                len: data.len(),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / dim,
                    col: k % dim,
                });
            }
            if field == Field::Real && z.im != 0.0 {
                return Err(Error::FieldMismatch {
                    row: k / dim,
                    col: k % dim,
                });
            }
        }
        Ok(Self { dim, field, data })
    }

    pub fn from_complex(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::new(dim, Field::Complex, data)
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            dim,
            Field::Real,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Real matrix from rows; panics on ragged input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.as_ref().len(), dim, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self::from_real(dim, &data)
    }

    pub fn from_complex_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.as_ref().len(), dim, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self::from_complex(dim, data)
    }

    /// Builds without validation. Kernel arithmetic can legitimately produce
    /// values outside the public invariants (e.g. overflow in a reconstruction).
    pub(crate) fn from_raw(dim: usize, field: Field, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, field, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self::from_raw(dim, Field::Real, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(dim, Field::Real, vec![ZERO; dim * dim])
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let dim = entries.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, &z) in entries.iter().enumerate() {
            data[i * dim + i] = z;
        }
        let field = if entries.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        Self::new(dim, field, data)
    }

    pub fn diag_real(entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&c)
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[CMatrix]) -> Result<Self> {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![ZERO; dim * dim];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    data[(off + i) * dim + off + j] = b.get(i, j);
                }
            }
            off += b.dim;
        }
        let field = if blocks.iter().all(|b| b.field == Field::Real) {
            Field::Real
        } else {
            Field::Complex
        };
        Ok(Self::from_raw(dim, field, data))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Same entries, tagged `Complex`.
    pub fn promote(&self) -> Self {
        Self::from_raw(self.dim, Field::Complex, self.data.clone())
    }

    /// Tags the matrix `Real` if every imaginary part is exactly zero.
    pub fn demote_if_real(mut self) -> Self {
        if self.data.iter().all(|z| z.im == 0.0) {
            self.field = Field::Real;
        }
        self
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Self::from_raw(d, self.field, data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        // Scaled accumulation keeps the norm finite for entries near f64::MAX.
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let s: f64 = self.data.iter().map(|z| (z / scale).norm_sqr()).sum();
        scale * s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let data = self.data.iter().map(|&z| z * c).collect();
        let field = if self.field == Field::Real && c.im == 0.0 {
            Field::Real
        } else {
            Field::Complex
        };
        Self::from_raw(self.dim, field, data)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        let data = self.data.iter().map(|&z| z * c).collect();
        Self::from_raw(self.dim, self.field, data)
    }

    /// `self − λ·I`.
    pub fn shift(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] -= lambda;
        }
        if lambda.im != 0.0 {
            out.field = Field::Complex;
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let out = &mut data[i * d..(i + 1) * d];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * d..(k + 1) * d];
                for (o, &b) in out.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        Self::from_raw(d, join_field(self.field, other.field), data)
    }

    pub fn mat_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, x.len(), "dimension mismatch in mat_vec");
        let d = self.dim;
        (0..d)
            .map(|i| {
                self.data[i * d..(i + 1) * d]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `selfᴴ · x` without forming the adjoint.
    pub fn adjoint_mat_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, x.len(), "dimension mismatch in adjoint_mat_vec");
        let d = self.dim;
        let mut out = vec![ZERO; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&self.data[i * d..(i + 1) * d]) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    /// Square power by repeated multiplication (no rescaling).
    pub fn pow_direct(&self, n: u64) -> Self {
        let mut out = Self::identity(self.dim);
        out.field = self.field;
        for _ in 0..n {
            out = out.matmul(self);
        }
        out
    }

    /// Inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(d).data;
        for col in 0..d {
            let (piv, pmax) = (col..d)
                .map(|r| (r, a[r * d + col].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..d {
                    a.swap(piv * d + j, col * d + j);
                    inv.swap(piv * d + j, col * d + j);
                }
            }
            let p = a[col * d + col];
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a[r * d + col] / p;
                if f == ZERO {
                    continue;
                }
                for j in 0..d {
                    let (ac, ic) = (a[col * d + j], inv[col * d + j]);
                    a[r * d + j] -= f * ac;
                    inv[r * d + j] -= f * ic;
                }
            }
        }
        for r in 0..d {
            let p = a[r * d + r];
            for j in 0..d {
                inv[r * d + j] /= p;
            }
        }
        let out = Self::from_raw(d, self.field, inv);
        if !out.is_finite() {
            return Err(Error::Singular);
        }
        Ok(out)
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn join_field(a: Field, b: Field) -> Field {
    if a == Field::Real && b == Field::Real {
        Field::Real
    } else {
        Field::Complex
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} ({:?})", self.dim, self.dim, self.field)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, " {:>10.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMatrix::from_raw(self.dim, join_field(self.field, rhs.field), data)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMatrix::from_raw(self.dim, join_field(self.field, rhs.field), data)
    }
}

pub(crate) fn vec_norm(x: &[Complex64]) -> f64 {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * x.iter().map(|z| (z / scale).norm_sqr()).sum::<f64>().sqrt()
}

/// `xᴴ y`.
pub(crate) fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}
