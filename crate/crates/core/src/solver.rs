//! Solving `Xⁿ + A₁Xⁿ⁻¹ + … + Aₙ = O` over circulant `X`.
//!
//! Conjugation by `S` turns every coefficient into its eigenvalue vector, so
//! the matrix equation splits into `d` independent monic scalar equations
//! `uⁿ + b₁⁽ⁱ⁾uⁿ⁻¹ + … + bₙ⁽ⁱ⁾ = 0`. Every choice of one distinct root per
//! equation maps back through the inverse transform to exactly one circulant
//! solution, so the solution count is the product of the distinct-root counts.

use serde::Serialize;

use crate::circulant::{eval_matrix_poly, Circulant};
use crate::error::{Error, Result};
use crate::poly::{
    cluster_distinct, find_roots, relative_tolerance, MonicPolynomial, RootSet, DEFAULT_CONV_TOL,
    DEFAULT_DISTINCT_TOL, DEFAULT_MAX_ITERS,
};
use crate::spectral::{circulant_from_eigenvalues_with, eigenvalues_with, RootsOfUnity};
use crate::Scalar;

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ENUMERATED: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Root iteration stopping tolerance.
    pub conv_tol: f64,
    /// Relative distinctness factor, scaled by `1 + max|root|` per equation.
    pub distinct_tol: f64,
    /// Residual acceptance factor, scaled by `(1 + max|a_{k,j}|)ⁿ`.
    pub residual_tol: f64,
    pub max_iters: usize,
    pub max_enumerated: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            conv_tol: DEFAULT_CONV_TOL,
            distinct_tol: DEFAULT_DISTINCT_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            max_enumerated: DEFAULT_MAX_ENUMERATED,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("conv_tol", self.conv_tol),
            ("distinct_tol", self.distinct_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a positive finite number, got {value}"
                )));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if self.max_enumerated == 0 {
            return Err(Error::InvalidConfig(
                "max_enumerated must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The coefficients `A₁, …, Aₙ` of a monic circulant matrix polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationInput {
    coeffs: Vec<Circulant>,
}

impl EquationInput {
    pub fn new(coeffs: Vec<Circulant>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidDimension("equation needs degree n >= 1".into()))?;
        let d = first.dim();
        if let Some(bad) = coeffs.iter().find(|a| a.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(EquationInput { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Circulant] {
        &self.coeffs
    }

    /// `(1 + max_{k,j} |a_{k,j}|)ⁿ`.
    pub fn scale(&self) -> f64 {
        let max_abs = self
            .coeffs
            .iter()
            .map(Circulant::max_abs)
            .fold(0.0, f64::max);
        (1.0 + max_abs).powi(self.degree() as i32)
    }

    /// Left-hand side of the equation at `x`.
    pub fn residual(&self, x: &Circulant) -> Result<Circulant> {
        eval_matrix_poly(&self.coeffs, x)
    }
}

/// The `d` decoupled scalar equations; `polys[i]` has coefficients `b_k^{(i)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSystem {
    pub d: usize,
    pub n: usize,
    pub polys: Vec<MonicPolynomial>,
}

/// `b_k^{(i)} = Σⱼ a_{k,j−1} r̄_{(i−1)(j−1)}`, i.e. the `i`-th eigenvalue of `A_k`.
pub fn spectral_reduce(eq: &EquationInput) -> Result<SpectralSystem> {
    let d = eq.dim();
    let roots = RootsOfUnity::new(d)?;
    let spectra: Vec<_> = eq
        .coeffs
        .iter()
        .map(|a| eigenvalues_with(&roots, a))
        .collect();
    let polys = (0..d)
        .map(|i| MonicPolynomial::new(spectra.iter().map(|v| v.0[i]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSystem {
        d,
        n: eq.degree(),
        polys,
    })
}

fn solve_system(system: &SpectralSystem, cfg: &SolverConfig) -> Result<Vec<RootSet>> {
    system
        .polys
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let roots = find_roots(p, cfg.max_iters, cfg.conv_tol).map_err(|e| e.at_equation(i))?;
            let tol = relative_tolerance(&roots, cfg.distinct_tol);
            Ok(cluster_distinct(&roots, tol))
        })
        .collect()
}

fn product(counts: &[usize]) -> Result<u128> {
    counts
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
        .ok_or(Error::CountOverflow)
}

/// `nᵈ`, or `None` when it does not fit in 128 bits.
pub fn solution_bound(n: usize, d: usize) -> Option<u128> {
    u32::try_from(d)
        .ok()
        .and_then(|d| (n as u128).checked_pow(d))
}

/// One circulant solution with the distinct-root choice that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Index into `root_sets[i].distinct` for each scalar equation.
    pub selection: Vec<usize>,
    pub x: Circulant,
    /// Frobenius norm of the left-hand side at `x`.
    pub residual: f64,
}

/// All circulant solutions, counted exactly and enumerated lazily.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    eq: EquationInput,
    cfg: SolverConfig,
    system: SpectralSystem,
    root_sets: Vec<RootSet>,
    count: u128,
}

impl SolutionSet {
    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn per_equation(&self) -> Vec<usize> {
        self.root_sets.iter().map(RootSet::count).collect()
    }

    pub fn root_sets(&self) -> &[RootSet] {
        &self.root_sets
    }

    pub fn system(&self) -> &SpectralSystem {
        &self.system
    }

    pub fn equation(&self) -> &EquationInput {
        &self.eq
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Absolute residual threshold `residual_tol · scale(eq)`.
    pub fn threshold(&self) -> f64 {
        self.cfg.residual_tol * self.eq.scale()
    }

    /// Cursor over every solution in lexicographic selection order
    /// (the first scalar equation varies slowest).
    pub fn iter(&self) -> SolutionCursor<'_> {
        SolutionCursor {
            set: self,
            roots: RootsOfUnity::new(self.eq.dim()).expect("d >= 1"),
            next: Some(vec![0; self.root_sets.len()]),
        }
    }

    /// Reconstruct the solution for one selection vector.
    pub fn solution_at(&self, selection: &[usize]) -> Result<Solution> {
        let roots = RootsOfUnity::new(self.eq.dim())?;
        self.build(&roots, selection)
    }

    fn build(&self, roots: &RootsOfUnity, selection: &[usize]) -> Result<Solution> {
        if selection.len() != self.root_sets.len() {
            return Err(Error::DimensionMismatch {
                expected: self.root_sets.len(),
                found: selection.len(),
            });
        }
        let diagonal: Vec<Scalar> = selection
            .iter()
            .zip(&self.root_sets)
            .map(|(&s, set)| {
                set.distinct.get(s).map(|r| r.root).ok_or_else(|| {
                    Error::InvalidDimension(format!(
                        "selection index {s} out of range for {} distinct roots",
                        set.count()
                    ))
                })
            })
            .collect::<Result<_>>()?;
        let x = circulant_from_eigenvalues_with(roots, &diagonal)?;
        let residual = self.eq.residual(&x)?.frobenius_norm();
        let threshold = self.threshold();
        if residual.is_nan() || residual > threshold {
            return Err(Error::ResidualExceeded {
                selection: selection.to_vec(),
                residual,
                threshold,
            });
        }
        Ok(Solution {
            selection: selection.to_vec(),
            x,
            residual,
        })
    }

    /// Up to `max_enumerated` solutions; `truncated` is set when more exist.
    pub fn materialize(&self) -> Result<Enumeration> {
        let cap = self.cfg.max_enumerated;
        let solutions = self.iter().take(cap).collect::<Result<Vec<_>>>()?;
        Ok(Enumeration {
            truncated: self.count > solutions.len() as u128,
            solutions,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub solutions: Vec<Solution>,
    pub truncated: bool,
}

/// Sequential cursor over a [`SolutionSet`]. A solution failing the residual
/// check is yielded as [`Error::ResidualExceeded`]; the cursor then moves on.
pub struct SolutionCursor<'a> {
    set: &'a SolutionSet,
    roots: RootsOfUnity,
    next: Option<Vec<usize>>,
}

impl Iterator for SolutionCursor<'_> {
    type Item = Result<Solution>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut following = current.clone();
        let mut advanced = false;
        for i in (0..following.len()).rev() {
            following[i] += 1;
            if following[i] < self.set.root_sets[i].count() {
                advanced = true;
                break;
            }
            following[i] = 0;
        }
        if advanced {
            self.next = Some(following);
        }
        Some(self.set.build(&self.roots, &current))
    }
}

/// Reduce, solve each scalar equation and cluster its roots.
///
/// Solutions are not materialized here; residual failures surface while
/// iterating the returned set.
pub fn solve_all(eq: &EquationInput, cfg: &SolverConfig) -> Result<SolutionSet> {
    cfg.validate()?;
    let system = spectral_reduce(eq)?;
    let root_sets = solve_system(&system, cfg)?;
    let counts: Vec<usize> = root_sets.iter().map(RootSet::count).collect();
    let count = product(&counts)?;
    Ok(SolutionSet {
        eq: eq.clone(),
        cfg: cfg.clone(),
        system,
        root_sets,
        count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCount {
    pub count: u128,
    pub per_equation: Vec<usize>,
}

pub fn count_solutions(eq: &EquationInput, cfg: &SolverConfig) -> Result<SolutionCount> {
    let set = solve_all(eq, cfg)?;
    Ok(SolutionCount {
        count: set.count(),
        per_equation: set.per_equation(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub ok: bool,
    pub residual: f64,
    pub threshold: f64,
}

/// Substitute `x` into the equation; accept when the residual is at most
/// `residual_tol · scale(eq)`.
pub fn verify_solution(
    eq: &EquationInput,
    x: &Circulant,
    residual_tol: f64,
) -> Result<Verification> {
    if x.dim() != eq.dim() {
        return Err(Error::DimensionMismatch {
            expected: eq.dim(),
            found: x.dim(),
        });
    }
    let residual = eq.residual(x)?.frobenius_norm();
    let threshold = residual_tol * eq.scale();
    Ok(Verification {
        ok: residual <= threshold,
        residual,
        threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub witnesses: Vec<String>,
}

/// Root separation statistics for one scalar equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapStats {
    /// 1-based scalar equation index.
    pub equation: usize,
    pub distinct: usize,
    pub min_gap: Option<f64>,
    pub max_spread: f64,
    pub tol_used: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub d: usize,
    pub n: usize,
    pub count: u128,
    /// `nᵈ`; absent when it exceeds 128 bits.
    pub bound: Option<u128>,
    pub per_equation: Vec<usize>,
    pub enumerated: usize,
    pub truncated: bool,
    pub checks: Vec<Check>,
    pub gaps: Vec<GapStats>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Solve and check existence, the `nᵈ` bound, the product law, the
/// attainment biconditional and the residual of every enumerated solution.
pub fn certify_theorems(eq: &EquationInput, cfg: &SolverConfig) -> Result<CertificationReport> {
    let set = solve_all(eq, cfg)?;
    let (d, n) = (eq.dim(), eq.degree());
    let per_equation = set.per_equation();
    let count = set.count();
    let bound = solution_bound(n, d);
    let mut checks = Vec::new();

    checks.push(Check {
        name: "existence".into(),
        passed: count >= 1,
        detail: format!("count = {count} >= 1"),
        witnesses: per_equation
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| format!("equation {} has no roots", i + 1))
            .collect(),
    });

    let within_bound = bound.is_none_or(|b| count <= b);
    checks.push(Check {
        name: "upper_bound".into(),
        passed: within_bound,
        detail: match bound {
            Some(b) => format!("count = {count} <= n^d = {b}"),
            None => format!("count = {count}, n^d exceeds 128 bits"),
        },
        witnesses: per_equation
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > n)
            .map(|(i, &c)| format!("equation {} has {c} > {n} distinct roots", i + 1))
            .collect(),
    });

    let recomputed = per_equation
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128));
    checks.push(Check {
        name: "product_law".into(),
        passed: recomputed == Some(count),
        detail: format!(
            "count = {count}, product of distinct-root counts = {}",
            recomputed.map_or("overflow".to_string(), |p| p.to_string())
        ),
        witnesses: Vec::new(),
    });

    let attains = bound == Some(count);
    let all_simple = per_equation.iter().all(|&c| c == n);
    checks.push(Check {
        name: "attainment".into(),
        passed: attains == all_simple,
        detail: format!(
            "count {} n^d, every equation {} n distinct roots",
            if attains { "attains" } else { "is below" },
            if all_simple { "has" } else { "does not have" }
        ),
        witnesses: per_equation
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != n)
            .map(|(i, &c)| format!("equation {} has {c} distinct roots", i + 1))
            .collect(),
    });

    let mut enumerated = 0;
    let mut failures = Vec::new();
    for item in set.iter().take(cfg.max_enumerated) {
        enumerated += 1;
        match item {
            Ok(_) => {}
            Err(Error::ResidualExceeded {
                selection,
                residual,
                threshold,
            }) => failures.push(format!(
                "selection {selection:?}: residual {residual:e} > {threshold:e}"
            )),
            Err(other) => return Err(other),
        }
    }
    checks.push(Check {
        name: "solutions_verified".into(),
        passed: failures.is_empty(),
        detail: format!(
            "{} of {enumerated} enumerated solutions within residual threshold {:e}",
            enumerated - failures.len(),
            set.threshold()
        ),
        witnesses: failures,
    });

    let gaps = set
        .root_sets()
        .iter()
        .enumerate()
        .map(|(i, rs)| GapStats {
            equation: i + 1,
            distinct: rs.count(),
            min_gap: rs.min_gap(),
            max_spread: rs.max_spread(),
            tol_used: rs.tol_used,
        })
        .collect();

    Ok(CertificationReport {
        d,
        n,
        count,
        bound,
        per_equation,
        enumerated,
        truncated: count > enumerated as u128,
        checks,
        gaps,
    })
}
