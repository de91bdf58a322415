//! Monic scalar polynomials: Horner evaluation, simultaneous Aberth–Ehrlich
//! root finding and tolerance-based clustering into distinct roots.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circulant::check_finite;
use crate::error::{Error, Result};
use crate::Scalar;

pub const DEFAULT_MAX_ITERS: usize = 200;
pub const DEFAULT_CONV_TOL: f64 = 1e-12;
/// Relative distinctness factor; the absolute tolerance is `factor · (1 + max|root|)`.
pub const DEFAULT_DISTINCT_TOL: f64 = 1e-8;

/// `xⁿ + b₁xⁿ⁻¹ + … + bₙ`. The leading 1 is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<Scalar>,
}

impl MonicPolynomial {
    /// `coeffs` are `(b₁, …, bₙ)`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidDimension(
                "monic polynomial needs degree at least 1".into(),
            ));
        }
        check_finite(&coeffs, "polynomial coefficients")?;
        Ok(MonicPolynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&b| Complex64::new(b, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `max(1, max_k |b_k|)`.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|b| b.norm()).fold(1.0, f64::max)
    }

    /// Horner evaluation; non-finite results are errors.
    pub fn eval(&self, x: Scalar) -> Result<Scalar> {
        let value = self.horner(x);
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::non_finite("polynomial evaluation"))
        }
    }

    fn horner(&self, x: Scalar) -> Scalar {
        self.coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, b| acc * x + b)
    }

    /// `(p(x), p'(x))` in one Horner pass.
    fn horner_with_derivative(&self, x: Scalar) -> (Scalar, Scalar) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for b in &self.coeffs {
            dp = dp * x + p;
            p = p * x + b;
        }
        (p, dp)
    }

    /// Accepted residual at a computed root: `tol · max(scale, |x|ⁿ + Σ|b_k||x|^{n−k})`.
    ///
    /// Away from the unit disk Horner's own rounding error grows like
    /// `eps·|x|ⁿ`, so the coefficient scale alone is not reachable there.
    pub fn residual_bound(&self, x: Scalar, tol: f64) -> f64 {
        tol * self.scale().max(self.abs_bound(x))
    }

    /// `|x|ⁿ + Σ |b_k| |x|^{n−k}`, the magnitude scale of Horner's rounding error at `x`.
    fn abs_bound(&self, x: Scalar) -> f64 {
        let r = x.norm();
        self.coeffs.iter().fold(1.0, |acc, b| acc * r + b.norm())
    }
}

/// Evaluate `p` at `x`.
pub fn poly_eval(p: &MonicPolynomial, x: Scalar) -> Result<Scalar> {
    p.eval(x)
}

fn root_order(a: &Scalar, b: &Scalar) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// All `n` complex roots of `p`, with multiplicity, by Aberth–Ehrlich iteration.
///
/// Each approximation stops moving once its update falls below
/// `conv_tol · (1 + |z|)` or its residual reaches the rounding floor of
/// Horner evaluation. Every returned root satisfies
/// [`MonicPolynomial::residual_bound`]. The result is sorted by real part,
/// then imaginary part.
pub fn find_roots(p: &MonicPolynomial, max_iters: usize, conv_tol: f64) -> Result<Vec<Scalar>> {
    if max_iters == 0 {
        return Err(Error::InvalidConfig("max_iters must be positive".into()));
    }
    if !(conv_tol > 0.0 && conv_tol.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "conv_tol must be a positive finite number, got {conv_tol}"
        )));
    }

    let n = p.degree();
    if n == 1 {
        return Ok(vec![-p.coeffs[0]]);
    }

    let radius = 1.0 + p.coeffs.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let mut z: Vec<Scalar> = (0..n)
        .map(|k| Complex64::from_polar(radius, (2.0 * PI * k as f64 + 0.5) / n as f64))
        .collect();
    let mut frozen = vec![false; n];
    let rounding = 4.0 * n as f64 * f64::EPSILON;

    let mut iterations = 0;
    while frozen.iter().any(|f| !f) {
        if iterations == max_iters {
            let residuals = z.iter().map(|&x| p.horner(x).norm()).collect();
            return Err(Error::NoConvergence {
                equation: None,
                iterations,
                best: z,
                residuals,
            });
        }
        iterations += 1;

        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let zk = z[k];
            let (value, deriv) = p.horner_with_derivative(zk);
            if value.norm() <= rounding * p.abs_bound(zk) {
                frozen[k] = true;
                continue;
            }
            let repulsion = z
                .iter()
                .enumerate()
                .filter(|&(j, zj)| j != k && *zj != zk)
                .map(|(_, zj)| (zk - zj).inv())
                .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t);
            let denom = deriv - value * repulsion;
            let step = value / denom;
            if !(step.re.is_finite() && step.im.is_finite()) {
                // stationary point of the Aberth correction: nudge off it
                z[k] = zk + Complex64::from_polar(1e-3 * (1.0 + zk.norm()), 1.0 + k as f64);
                continue;
            }
            z[k] = zk - step;
            if step.norm() < conv_tol * (1.0 + z[k].norm()) {
                frozen[k] = true;
            }
        }
    }

    let residuals: Vec<f64> = z.iter().map(|&x| p.horner(x).norm()).collect();
    if z.iter()
        .zip(&residuals)
        .any(|(&x, &r)| r.is_nan() || r > p.residual_bound(x, conv_tol))
    {
        return Err(Error::NoConvergence {
            equation: None,
            iterations,
            best: z,
            residuals,
        });
    }

    z.sort_by(root_order);
    Ok(z)
}

/// One distinct root together with the cluster it summarizes.
#[derive(Clone, Debug, PartialEq)]
pub struct DistinctRoot {
    /// Mean of the cluster members.
    pub root: Scalar,
    pub multiplicity: usize,
    /// Largest distance from a member to `root`.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub all_roots: Vec<Scalar>,
    pub distinct: Vec<DistinctRoot>,
    pub tol_used: f64,
}

impl RootSet {
    /// Number of distinct roots.
    pub fn count(&self) -> usize {
        self.distinct.len()
    }

    /// Smallest distance between two distinct roots, if there are at least two.
    pub fn min_gap(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.distinct.iter().enumerate() {
            for b in &self.distinct[i + 1..] {
                let gap = (a.root - b.root).norm();
                best = Some(best.map_or(gap, |g| g.min(gap)));
            }
        }
        best
    }

    /// Largest cluster spread across all distinct roots.
    pub fn max_spread(&self) -> f64 {
        self.distinct.iter().map(|r| r.spread).fold(0.0, f64::max)
    }
}

/// `tol_factor · (1 + max|root|)`.
pub fn relative_tolerance(roots: &[Scalar], tol_factor: f64) -> f64 {
    tol_factor * (1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // smaller index stays root so cluster order follows input order
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Single-linkage clustering: roots within `tol` of each other share a cluster.
///
/// Clusters keep the order of their first member in `roots`. If two cluster
/// means still land within `tol`, those clusters are merged as well, so the
/// distinct roots are always separated by more than `tol`.
pub fn cluster_distinct(roots: &[Scalar], tol: f64) -> RootSet {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol {
                union(&mut parent, i, j);
            }
        }
    }

    loop {
        let groups = groups(&mut parent);
        let means: Vec<Scalar> = groups.iter().map(|g| mean(roots, g)).collect();
        let mut merged = false;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                if (means[a] - means[b]).norm() <= tol {
                    union(&mut parent, groups[a][0], groups[b][0]);
                    merged = true;
                }
            }
        }
        if !merged {
            let distinct = groups
                .iter()
                .zip(means)
                .map(|(g, m)| DistinctRoot {
                    root: m,
                    multiplicity: g.len(),
                    spread: g.iter().map(|&i| (roots[i] - m).norm()).fold(0.0, f64::max),
                })
                .collect();
            return RootSet {
                all_roots: roots.to_vec(),
                distinct,
                tol_used: tol,
            };
        }
    }
}

fn groups(parent: &mut [usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; parent.len()];
    for i in 0..parent.len() {
        let r = find(parent, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(i);
    }
    out
}

fn mean(roots: &[Scalar], members: &[usize]) -> Scalar {
    let sum = members
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &i| acc + roots[i]);
    sum / members.len() as f64
}
