//! Roots of unity, the Vandermonde matrix `S` with `s_{i,j} = r_{(i−1)(j−1)}`,
//! and the transform between a circulant and the diagonal of `S·A·S⁻¹`.
//!
//! Formulas below use 1-based `i, j` to match the usual statement; storage
//! is 0-based, so exponent `(i−1)(j−1)` becomes `i·j` on stored indices.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circulant::{check_finite, Circulant, DenseMatrix};
use crate::error::{Error, Result};
use crate::Scalar;

/// Table of `r_k = e^{i2πk/d}` and `r̄_k`, indexed modulo `d`.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    r: Vec<Scalar>,
    r_conj: Vec<Scalar>,
}

impl RootsOfUnity {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("d must be at least 1".into()));
        }
        // each entry straight from cos/sin; r[0] is exactly 1
        let r: Vec<Scalar> = (0..d)
            .map(|k| {
                if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
                }
            })
            .collect();
        let r_conj = r.iter().map(|z| z.conj()).collect();
        Ok(RootsOfUnity { r, r_conj })
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// `r_k` with `k` reduced modulo `d` (negative `k` allowed).
    pub fn r(&self, k: i64) -> Scalar {
        self.r[k.rem_euclid(self.dim() as i64) as usize]
    }

    /// `r̄_k` with `k` reduced modulo `d`.
    pub fn r_conj(&self, k: i64) -> Scalar {
        self.r_conj[k.rem_euclid(self.dim() as i64) as usize]
    }

    pub fn table(&self) -> &[Scalar] {
        &self.r
    }

    /// `r_{i·j mod d}` without going through `i64`.
    fn r_prod(&self, i: usize, j: usize) -> Scalar {
        self.r[(i * j) % self.dim()]
    }

    fn r_conj_prod(&self, i: usize, j: usize) -> Scalar {
        self.r_conj[(i * j) % self.dim()]
    }
}

/// `S` and `S⁻¹ = d⁻¹·S̄` as dense matrices.
#[derive(Clone, Debug)]
pub struct FourierMatrix {
    pub s: DenseMatrix,
    pub s_inv: DenseMatrix,
}

impl FourierMatrix {
    pub fn new(d: usize) -> Result<Self> {
        let roots = RootsOfUnity::new(d)?;
        let inv_d = 1.0 / d as f64;
        Ok(FourierMatrix {
            s: DenseMatrix::from_fn(d, |i, j| roots.r_prod(i, j)),
            s_inv: DenseMatrix::from_fn(d, |i, j| roots.r_conj_prod(i, j) * inv_d),
        })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// Dense `S·A·S⁻¹`.
    pub fn conjugate(&self, a: &Circulant) -> Result<DenseMatrix> {
        self.s.matmul(&a.to_dense())?.matmul(&self.s_inv)
    }
}

/// Diagonal `(v₁, …, v_d)` of `S·A·S⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueVector(pub Vec<Scalar>);

impl EigenvalueVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }
}

/// `vᵢ = Σⱼ a_{j−1} r̄_{(i−1)(j−1)}`.
pub fn eigenvalues(a: &Circulant) -> EigenvalueVector {
    let roots = RootsOfUnity::new(a.dim()).expect("circulant has d >= 1");
    eigenvalues_with(&roots, a)
}

pub(crate) fn eigenvalues_with(roots: &RootsOfUnity, a: &Circulant) -> EigenvalueVector {
    let d = a.dim();
    let row = a.first_row();
    EigenvalueVector(
        (0..d)
            .map(|i| {
                row.iter()
                    .enumerate()
                    .map(|(j, aj)| aj * roots.r_conj_prod(i, j))
                    .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t)
            })
            .collect(),
    )
}

/// Inverse of [`eigenvalues`]: `a_{j−1} = d⁻¹ Σᵢ vᵢ r_{(i−1)(j−1)}`.
pub fn circulant_from_eigenvalues(v: &EigenvalueVector) -> Result<Circulant> {
    let roots = RootsOfUnity::new(v.dim())?;
    circulant_from_eigenvalues_with(&roots, v.as_slice())
}

pub(crate) fn circulant_from_eigenvalues_with(
    roots: &RootsOfUnity,
    v: &[Scalar],
) -> Result<Circulant> {
    check_finite(v, "eigenvalue vector")?;
    let d = v.len();
    let inv_d = 1.0 / d as f64;
    let row = (0..d)
        .map(|j| {
            v.iter()
                .enumerate()
                .map(|(i, vi)| vi * roots.r_prod(i, j))
                .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t)
                * inv_d
        })
        .collect();
    Circulant::new(row)
}

/// Largest off-diagonal magnitude of the dense conjugation `S·A·S⁻¹`.
pub fn conjugate_check(a: &Circulant) -> f64 {
    let fourier = FourierMatrix::new(a.dim()).expect("circulant has d >= 1");
    fourier
        .conjugate(a)
        .expect("dimensions agree by construction")
        .max_off_diagonal()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Complex64::new(re, im)
    }

    fn near(a: Scalar, b: Scalar, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn roots_small_cases() {
        assert_eq!(RootsOfUnity::new(1).unwrap().table(), &[c(1.0, 0.0)]);
        let r2 = RootsOfUnity::new(2).unwrap();
        assert_eq!(r2.r(0), c(1.0, 0.0));
        assert!(near(r2.r(1), c(-1.0, 0.0), 1e-15));
        let r4 = RootsOfUnity::new(4).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (k, e) in expected.iter().enumerate() {
            assert!(near(r4.r(k as i64), *e, 1e-15));
        }
        assert!(near(r4.r(1) * r4.r(1), r4.r(2), 1e-15));
        assert!(RootsOfUnity::new(0).is_err());
    }

    #[test]
    fn roots_table_invariants() {
        for d in 1..=32 {
            let roots = RootsOfUnity::new(d).unwrap();
            assert_eq!(roots.r(0), c(1.0, 0.0));
            for k in 0..d as i64 {
                assert!((roots.r(k).norm() - 1.0).abs() <= 1e-15);
                assert!(near(roots.r(k) * roots.r_conj(k), c(1.0, 0.0), 1e-15));
                assert_eq!(roots.r(k), roots.r(k + d as i64));
                assert_eq!(roots.r(k), roots.r(k - 3 * d as i64));
            }
        }
    }

    #[test]
    fn fourier_small_cases() {
        let f1 = FourierMatrix::new(1).unwrap();
        assert_eq!(f1.s.get(0, 0), c(1.0, 0.0));
        assert_eq!(f1.s_inv.get(0, 0), c(1.0, 0.0));

        let f2 = FourierMatrix::new(2).unwrap();
        let s = [[1.0, 1.0], [1.0, -1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(near(f2.s.get(i, j), c(s[i][j], 0.0), 1e-15));
                assert!(near(f2.s_inv.get(i, j), c(0.5 * s[i][j], 0.0), 1e-15));
            }
        }

        let f3 = FourierMatrix::new(3).unwrap();
        let r = RootsOfUnity::new(3).unwrap();
        assert_eq!(f3.s.row(1), &[c(1.0, 0.0), r.r(1), r.r(2)]);
        assert!(FourierMatrix::new(0).is_err());
    }

    #[test]
    fn fourier_inverse_and_symmetry() {
        for d in 1..=12 {
            let f = FourierMatrix::new(d).unwrap();
            let prod = f.s.matmul(&f.s_inv).unwrap();
            assert!(prod.max_abs_diff(&DenseMatrix::identity(d)) <= 1e-12);
            for i in 0..d {
                for j in 0..d {
                    assert_eq!(f.s.get(i, j), f.s.get(j, i));
                }
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let a = Circulant::new(vec![c(2.5, -1.0)]).unwrap();
        assert_eq!(eigenvalues(&a).0, vec![c(2.5, -1.0)]);

        let v = eigenvalues(&Circulant::from_real(&[2.0, 1.0]).unwrap());
        assert!(near(v.0[0], c(3.0, 0.0), 1e-15));
        assert!(near(v.0[1], c(1.0, 0.0), 1e-15));

        for d in 1..=6 {
            let v = eigenvalues(&Circulant::identity(d).unwrap());
            assert!(v.0.iter().all(|z| *z == c(1.0, 0.0)));
        }
    }

    #[test]
    fn inverse_transform_examples() {
        for d in 1..=6 {
            let x = circulant_from_eigenvalues(&EigenvalueVector(vec![c(1.0, 0.0); d])).unwrap();
            let id = Circulant::identity(d).unwrap();
            for (a, b) in x.first_row().iter().zip(id.first_row()) {
                assert!(near(*a, *b, 1e-15));
            }
        }
        let x =
            circulant_from_eigenvalues(&EigenvalueVector(vec![c(3.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!(near(x.first_row()[0], c(2.0, 0.0), 1e-15));
        assert!(near(x.first_row()[1], c(1.0, 0.0), 1e-15));
        let x =
            circulant_from_eigenvalues(&EigenvalueVector(vec![c(1.0, 0.0), c(-1.0, 0.0)])).unwrap();
        assert!(near(x.first_row()[0], c(0.0, 0.0), 1e-15));
        assert!(near(x.first_row()[1], c(1.0, 0.0), 1e-15));

        assert!(matches!(
            circulant_from_eigenvalues(&EigenvalueVector(vec![c(f64::NAN, 0.0)])),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn conjugation_examples() {
        assert!(conjugate_check(&Circulant::identity(3).unwrap()) <= 1e-15);
        assert!(conjugate_check(&Circulant::generator(2).unwrap()) <= 1e-15);
        let f = FourierMatrix::new(2).unwrap();
        let diag = f
            .conjugate(&Circulant::generator(2).unwrap())
            .unwrap()
            .diagonal();
        assert!(near(diag[0], c(1.0, 0.0), 1e-15));
        assert!(near(diag[1], c(-1.0, 0.0), 1e-15));
    }

    fn circulant_strategy() -> impl Strategy<Value = Circulant> {
        (1usize..=8).prop_flat_map(|d| {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d).prop_map(|v| {
                Circulant::new(v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
            })
        })
    }

    fn pair() -> impl Strategy<Value = (Circulant, Circulant)> {
        (1usize..=8).prop_flat_map(|d| {
            let one = proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d).prop_map(|v| {
                Circulant::new(v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
            });
            (one.clone(), one)
        })
    }

    proptest! {
        #[test]
        fn linearity_and_multiplicativity((x, y) in pair()) {
            let vx = eigenvalues(&x);
            let vy = eigenvalues(&y);
            let vsum = eigenvalues(&x.checked_add(&y).unwrap());
            let vprod = eigenvalues(&x.checked_mul(&y).unwrap());
            for i in 0..x.dim() {
                prop_assert!(near(vsum.0[i], vx.0[i] + vy.0[i], 1e-12));
                let expect = vx.0[i] * vy.0[i];
                prop_assert!(near(vprod.0[i], expect, 1e-10 * (1.0 + expect.norm())));
            }
        }

        #[test]
        fn transform_round_trip(a in circulant_strategy()) {
            let back = circulant_from_eigenvalues(&eigenvalues(&a)).unwrap();
            for (p, q) in back.first_row().iter().zip(a.first_row()) {
                prop_assert!(near(*p, *q, 1e-12));
            }
        }

        #[test]
        fn diagonal_matches_dense_conjugation(a in circulant_strategy()) {
            let dense = FourierMatrix::new(a.dim()).unwrap().conjugate(&a).unwrap();
            for (p, q) in eigenvalues(&a).0.iter().zip(dense.diagonal()) {
                prop_assert!(near(*p, q, 1e-10));
            }
            prop_assert!(conjugate_check(&a) <= 1e-10 * (1.0 + a.frobenius_norm()));
        }

        #[test]
        fn generator_spectrum(d in 1usize..=16) {
            let roots = RootsOfUnity::new(d).unwrap();
            let v = eigenvalues(&Circulant::generator(d).unwrap());
            for i in 0..d {
                prop_assert!(near(v.0[i], roots.r_conj(i as i64), 1e-12));
            }
        }
    }
}
