//! The commutative ring of `d × d` circulant matrices.
//!
//! A circulant is stored as its first row `(a₀, …, a_{d−1})`; row `i` of the
//! dense matrix is the first row rotated right by `i`, so entry `(i, j)` is
//! `a_{(j−i) mod d}`. Products are cyclic convolutions of first rows. The
//! dense form exists for cross-checking and display only.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::Scalar;

pub(crate) fn check_finite(values: &[Scalar], context: &str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::non_finite(context))
    }
}

/// A circulant matrix `circ(a₀, …, a_{d−1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circulant {
    first_row: Vec<Scalar>,
}

impl Circulant {
    pub fn new(first_row: Vec<Scalar>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::InvalidDimension(
                "circulant first row must be nonempty".into(),
            ));
        }
        check_finite(&first_row, "circulant first row")?;
        Ok(Circulant { first_row })
    }

    /// Build from real entries.
    pub fn from_real(first_row: &[f64]) -> Result<Self> {
        Self::new(first_row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d])
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::basis(d, 0)
    }

    /// The cyclic shift `C = circ(0, 1, 0, …, 0)`; for `d = 1` this is `circ(1)`.
    pub fn generator(d: usize) -> Result<Self> {
        Self::basis(d, 1 % d.max(1))
    }

    fn basis(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("d must be at least 1".into()));
        }
        let mut row = vec![Complex64::new(0.0, 0.0); d];
        row[k] = Complex64::new(1.0, 0.0);
        Ok(Circulant { first_row: row })
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Scalar] {
        &self.first_row
    }

    pub fn into_first_row(self) -> Vec<Scalar> {
        self.first_row
    }

    fn same_dim(&self, other: &Circulant) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    fn finish(first_row: Vec<Scalar>, context: &str) -> Result<Self> {
        check_finite(&first_row, context)?;
        Ok(Circulant { first_row })
    }

    pub fn checked_add(&self, other: &Circulant) -> Result<Circulant> {
        self.same_dim(other)?;
        let row = self
            .first_row
            .iter()
            .zip(&other.first_row)
            .map(|(a, b)| a + b)
            .collect();
        Self::finish(row, "circulant sum")
    }

    pub fn checked_sub(&self, other: &Circulant) -> Result<Circulant> {
        self.same_dim(other)?;
        let row = self
            .first_row
            .iter()
            .zip(&other.first_row)
            .map(|(a, b)| a - b)
            .collect();
        Self::finish(row, "circulant difference")
    }

    /// Product as the cyclic convolution `c_k = Σᵢ aᵢ b_{(k−i) mod d}`.
    pub fn checked_mul(&self, other: &Circulant) -> Result<Circulant> {
        self.same_dim(other)?;
        let d = self.dim();
        let a = &self.first_row;
        let b = &other.first_row;
        let row = (0..d)
            .map(|k| {
                (0..d)
                    .map(|i| a[i] * b[(k + d - i) % d])
                    .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t)
            })
            .collect();
        Self::finish(row, "circulant product")
    }

    pub fn scale(&self, factor: Scalar) -> Result<Circulant> {
        let row = self.first_row.iter().map(|a| a * factor).collect();
        Self::finish(row, "scaled circulant")
    }

    pub fn neg(&self) -> Circulant {
        Circulant {
            first_row: self.first_row.iter().map(|a| -a).collect(),
        }
    }

    /// `self^k` by square-and-multiply; `k = 0` yields the identity.
    pub fn pow(&self, mut k: u64) -> Result<Circulant> {
        let mut result = Circulant::identity(self.dim())?;
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let d = self.dim();
        DenseMatrix::from_fn(d, |i, j| self.first_row[(j + d - i) % d])
    }

    /// Frobenius norm of the dense expansion, `sqrt(d · Σ|a_j|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        let sum_sq: f64 = self.first_row.iter().map(|a| a.norm_sqr()).sum();
        (self.dim() as f64 * sum_sq).sqrt()
    }

    /// Largest entry magnitude `max_j |a_j|`.
    pub fn max_abs(&self) -> f64 {
        self.first_row.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Circulant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circ(")?;
        for (k, a) in self.first_row.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Residual `Xⁿ + A₁Xⁿ⁻¹ + … + Aₙ` evaluated as
/// `(((X + A₁)X + A₂)X + …) + Aₙ`.
pub fn eval_matrix_poly(coeffs: &[Circulant], x: &Circulant) -> Result<Circulant> {
    if coeffs.is_empty() {
        return Err(Error::InvalidDimension(
            "matrix polynomial needs degree at least 1".into(),
        ));
    }
    let last = coeffs.len() - 1;
    let mut acc = x.clone();
    for (k, a) in coeffs.iter().enumerate() {
        acc = acc.checked_add(a)?;
        if k < last {
            acc = acc.checked_mul(x)?;
        }
    }
    Ok(acc)
}

/// Square complex matrix in row-major order, used as a cross-check surface.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let d = self.dim;
        Ok(Self::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.get(i, k) * other.get(k, j))
                .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t)
        }))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise distance `max |self_ij − other_ij|`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dense dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim;
        (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).norm())
            .fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }
}
