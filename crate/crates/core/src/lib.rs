//! Circulant solutions of monic matrix polynomial equations
//! `Xⁿ + A₁Xⁿ⁻¹ + … + Aₙ = O` with circulant coefficients.
//!
//! The DFT-type matrix `S` diagonalizes every circulant at once, so the
//! equation decouples into `d` scalar monic polynomials. Their distinct roots
//! determine every circulant solution and the exact solution count.

pub mod circulant;
pub mod cli;
pub mod error;
pub mod poly;
pub mod solver;
pub mod spectral;

pub use num_complex::Complex64;

/// Complex scalar entry.
pub type Scalar = Complex64;

pub use circulant::{eval_matrix_poly, Circulant, DenseMatrix};
pub use error::{Error, Result};
pub use poly::{cluster_distinct, find_roots, poly_eval, DistinctRoot, MonicPolynomial, RootSet};
pub use solver::{
    certify_theorems, count_solutions, solve_all, spectral_reduce, verify_solution,
    CertificationReport, EquationInput, Solution, SolutionSet, SolverConfig, SpectralSystem,
};
pub use spectral::{
    circulant_from_eigenvalues, conjugate_check, eigenvalues, EigenvalueVector, FourierMatrix,
    RootsOfUnity,
};
