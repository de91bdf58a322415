//! Shared helpers for the integration suites: seeded sampling and a dense
//! matrix oracle that does not go through the library's transform code.

#![allow(dead_code)]

use std::f64::consts::PI;

use circsolve::{Circulant, Complex64, EquationInput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<Complex64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_box(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_circulant(rng: &mut ChaCha8Rng, d: usize) -> Circulant {
    Circulant::new((0..d).map(|_| unit_box(rng)).collect()).unwrap()
}

pub fn random_equation(rng: &mut ChaCha8Rng, d: usize, n: usize) -> EquationInput {
    EquationInput::new((0..n).map(|_| random_circulant(rng, d)).collect()).unwrap()
}

pub fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Entry (i, j) is `a_{(j−i) mod d}`, written out from the definition.
pub fn dense_of(a: &Circulant) -> Dense {
    let d = a.dim();
    let row = a.first_row();
    (0..d)
        .map(|i| (0..d).map(|j| row[(d + j - i) % d]).collect())
        .collect()
}

pub fn dense_mul(x: &Dense, y: &Dense) -> Dense {
    let d = x.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(zero(), |acc, k| acc + x[i][k] * y[k][j]))
                .collect()
        })
        .collect()
}

pub fn dense_add(x: &Dense, y: &Dense) -> Dense {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
        .collect()
}

pub fn dense_identity(d: usize) -> Dense {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

pub fn dense_frobenius(x: &Dense) -> f64 {
    x.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `S` with entries `e^{i2π·i·j/d}` and `S⁻¹ = S̄ / d`.
pub fn dft_pair(d: usize) -> (Dense, Dense) {
    let w = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * ((k % d) as f64) / d as f64);
    let s: Dense = (0..d).map(|i| (0..d).map(|j| w(i * j)).collect()).collect();
    let s_inv = s
        .iter()
        .map(|r| r.iter().map(|z| z.conj() / d as f64).collect())
        .collect();
    (s, s_inv)
}

/// Dense evaluation of `Xⁿ + A₁Xⁿ⁻¹ + … + Aₙ` by explicit powers.
pub fn dense_residual(eq: &EquationInput, x: &Circulant) -> Dense {
    let xd = dense_of(x);
    let n = eq.degree();
    let mut powers = vec![dense_identity(x.dim())];
    for _ in 0..n {
        let next = dense_mul(powers.last().unwrap(), &xd);
        powers.push(next);
    }
    let mut acc = powers[n].clone();
    for (k, a) in eq.coeffs().iter().enumerate() {
        acc = dense_add(&acc, &dense_mul(&dense_of(a), &powers[n - 1 - k]));
    }
    acc
}

/// Roots of `x² + b₁x + b₂` by the cancellation-free quadratic formula.
pub fn quadratic_roots(b1: Complex64, b2: Complex64) -> [Complex64; 2] {
    let disc = (b1 * b1 - 4.0 * b2).sqrt();
    let q = if (b1.conj() * disc).re >= 0.0 {
        -(b1 + disc) / 2.0
    } else {
        -(b1 - disc) / 2.0
    };
    if q.norm() == 0.0 {
        [q, q]
    } else {
        [q, b2 / q]
    }
}

/// Smallest max-distance over the two pairings of two 2-element sets.
pub fn match_two(a: &[Complex64], b: &[Complex64; 2]) -> f64 {
    let straight = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let crossed = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    straight.min(crossed)
}
