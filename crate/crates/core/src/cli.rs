//! Command-line front end: equation/solution file formats and the
//! `reduce | solve | count | verify | certify` commands.
//!
//! Files are JSON documents; a complex number is a `[re, im]` pair. Every
//! floating-point value is written with 17 significant digits so output is
//! round-trip exact and byte-stable across runs.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::circulant::Circulant;
use crate::error::Error;
use crate::poly::{DEFAULT_CONV_TOL, DEFAULT_DISTINCT_TOL, DEFAULT_MAX_ITERS};
use crate::solver::{
    certify_theorems, count_solutions, solve_all, spectral_reduce, verify_solution,
    CertificationReport, EquationInput, SolverConfig, DEFAULT_MAX_ENUMERATED, DEFAULT_RESIDUAL_TOL,
};
use crate::Scalar;

pub const EXIT_OK: i32 = 0;
/// A verification or certification check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_RESIDUAL_EXCEEDED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: parse error: {message}")]
    Parse { path: String, message: String },

    #[error("{path}: {message}")]
    Validation { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Solver(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            CliError::Solver(Error::ResidualExceeded { .. }) => EXIT_RESIDUAL_EXCEEDED,
            _ => EXIT_INVALID_INPUT,
        }
    }
}

/// On-disk form of `Xⁿ + A₁Xⁿ⁻¹ + … + Aₙ = O`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationFile {
    pub d: usize,
    pub n: usize,
    /// First rows of `A₁ … Aₙ`.
    pub coefficients: Vec<Vec<[f64; 2]>>,
}

impl EquationFile {
    pub fn from_equation(eq: &EquationInput) -> Self {
        EquationFile {
            d: eq.dim(),
            n: eq.degree(),
            coefficients: eq.coeffs().iter().map(|a| pairs(a.first_row())).collect(),
        }
    }

    /// Check shape and finiteness; errors name the offending coefficient (1-based).
    pub fn to_equation(&self) -> std::result::Result<EquationInput, String> {
        if self.d == 0 {
            return Err("d must be at least 1".into());
        }
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        if self.coefficients.len() != self.n {
            return Err(format!(
                "expected n = {} coefficients, found {}",
                self.n,
                self.coefficients.len()
            ));
        }
        let mut coeffs = Vec::with_capacity(self.n);
        for (k, row) in self.coefficients.iter().enumerate() {
            if row.len() != self.d {
                return Err(format!(
                    "coefficient A{} has {} entries, expected d = {}",
                    k + 1,
                    row.len(),
                    self.d
                ));
            }
            let a =
                Circulant::new(scalars(row)).map_err(|e| format!("coefficient A{}: {e}", k + 1))?;
            coeffs.push(a);
        }
        EquationInput::new(coeffs).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub selection: Vec<usize>,
    pub first_row: Vec<[f64; 2]>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub conv_tol: f64,
    pub distinct_tol: f64,
    pub residual_tol: f64,
    pub max_iters: usize,
    pub max_enumerated: usize,
}

impl From<&SolverConfig> for Tolerances {
    fn from(cfg: &SolverConfig) -> Self {
        Tolerances {
            conv_tol: cfg.conv_tol,
            distinct_tol: cfg.distinct_tol,
            residual_tol: cfg.residual_tol,
            max_iters: cfg.max_iters,
            max_enumerated: cfg.max_enumerated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub count: u128,
    pub per_equation_distinct: Vec<usize>,
    pub solutions: Vec<SolutionRecord>,
    pub truncated: bool,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedEquation {
    /// 1-based.
    pub index: usize,
    pub coefficients: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReduceOutput {
    pub d: usize,
    pub n: usize,
    pub equations: Vec<ReducedEquation>,
}

fn pairs(values: &[Scalar]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn scalars(values: &[[f64; 2]]) -> Vec<Scalar> {
    values
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

/// Pretty JSON where every `f64` is printed as `{:.16e}`.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialize with 17 significant digits per float, trailing newline included.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("in-memory serialization of finite values cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_equation(path: &Path) -> Result<EquationInput, CliError> {
    let file: EquationFile = parse_json(path, &read_file(path)?)?;
    file.to_equation().map_err(|message| CliError::Validation {
        path: path.display().to_string(),
        message,
    })
}

pub fn load_solutions(path: &Path) -> Result<SolutionFile, CliError> {
    parse_json(path, &read_file(path)?)
}

#[derive(Debug, Parser)]
#[command(
    name = "circsolve",
    version,
    about = "Circulant solutions of monic matrix polynomial equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Root iteration convergence tolerance.
    #[arg(long = "tol", default_value_t = DEFAULT_CONV_TOL)]
    pub conv_tol: f64,
    /// Relative tolerance under which two scalar roots count as one.
    #[arg(long, default_value_t = DEFAULT_DISTINCT_TOL)]
    pub distinct_tol: f64,
    /// Residual acceptance factor, scaled by (1 + max|a|)^n.
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    pub residual_tol: f64,
    /// Iteration cap for each scalar root solve.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
}

impl SolverFlags {
    fn config(&self, max_enumerated: usize) -> SolverConfig {
        SolverConfig {
            conv_tol: self.conv_tol,
            distinct_tol: self.distinct_tol,
            residual_tol: self.residual_tol,
            max_iters: self.max_iters,
            max_enumerated,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the decoupled scalar polynomials.
    Reduce { input: PathBuf },
    /// Enumerate all circulant solutions.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        /// Cap on the number of materialized solutions.
        #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATED)]
        max_solutions: usize,
        /// Write the solution file here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the solution count and the distinct-root count per scalar equation.
    Count {
        input: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        #[arg(long)]
        json: bool,
    },
    /// Substitute every solution from a solution file into the equation.
    Verify { input: PathBuf, solutions: PathBuf },
    /// Solve and check the existence, bound, product and attainment properties.
    Certify {
        input: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATED)]
        max_solutions: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Execute one command, writing the report to `out`. Returns the exit code
/// for completed runs; failures come back as [`CliError`].
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io_err = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    match &cli.command {
        Command::Reduce { input } => {
            let eq = load_equation(input)?;
            out.write_all(reduce_report(&eq)?.as_bytes())
                .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            input,
            flags,
            max_solutions,
            output,
        } => {
            let eq = load_equation(input)?;
            let file = solve_to_file(&eq, &flags.config(*max_solutions))?;
            let text = to_json(&file);
            match output {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    writeln!(
                        out,
                        "{}; {} solution(s) written to {}{}",
                        count_line(file.count, &file.per_equation_distinct),
                        file.solutions.len(),
                        path.display(),
                        if file.truncated { " (truncated)" } else { "" }
                    )
                    .map_err(io_err)?;
                }
                None => out.write_all(text.as_bytes()).map_err(io_err)?,
            }
            Ok(EXIT_OK)
        }
        Command::Count { input, flags, json } => {
            let eq = load_equation(input)?;
            let counted = count_solutions(&eq, &flags.config(DEFAULT_MAX_ENUMERATED))?;
            let text = if *json {
                to_json(&counted)
            } else {
                format!("{}\n", count_line(counted.count, &counted.per_equation))
            };
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify { input, solutions } => {
            let eq = load_equation(input)?;
            let file = load_solutions(solutions)?;
            let (text, all_ok) = verify_report(&eq, &file, solutions)?;
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Certify {
            input,
            flags,
            max_solutions,
            json,
        } => {
            let eq = load_equation(input)?;
            let report = certify_theorems(&eq, &flags.config(*max_solutions))?;
            let text = if *json {
                to_json(&report)
            } else {
                certify_text(&report)
            };
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}

pub fn reduce_report(eq: &EquationInput) -> Result<String, CliError> {
    let system = spectral_reduce(eq)?;
    let output = ReduceOutput {
        d: system.d,
        n: system.n,
        equations: system
            .polys
            .iter()
            .enumerate()
            .map(|(i, p)| ReducedEquation {
                index: i + 1,
                coefficients: pairs(p.coeffs()),
            })
            .collect(),
    };
    Ok(to_json(&output))
}

/// Solve and materialize up to `cfg.max_enumerated` solutions.
pub fn solve_to_file(eq: &EquationInput, cfg: &SolverConfig) -> Result<SolutionFile, CliError> {
    let set = solve_all(eq, cfg)?;
    let enumeration = set.materialize()?;
    Ok(SolutionFile {
        count: set.count(),
        per_equation_distinct: set.per_equation(),
        solutions: enumeration
            .solutions
            .iter()
            .map(|s| SolutionRecord {
                selection: s.selection.clone(),
                first_row: pairs(s.x.first_row()),
                residual: s.residual,
            })
            .collect(),
        truncated: enumeration.truncated,
        tolerances: cfg.into(),
    })
}

/// `"4 = 2·2"`; a single scalar equation prints just the count.
pub fn count_line(count: u128, per_equation: &[usize]) -> String {
    if per_equation.len() <= 1 {
        count.to_string()
    } else {
        let factors: Vec<String> = per_equation.iter().map(|c| c.to_string()).collect();
        format!("{count} = {}", factors.join("·"))
    }
}

/// Per-solution table and whether every row verified.
pub fn verify_report(
    eq: &EquationInput,
    file: &SolutionFile,
    solutions_path: &Path,
) -> Result<(String, bool), CliError> {
    let tol = file.tolerances.residual_tol;
    let mut text = String::new();
    let mut failed = 0;
    let mut threshold = tol * eq.scale();
    for (row, record) in file.solutions.iter().enumerate() {
        let x = Circulant::new(scalars(&record.first_row)).map_err(|e| CliError::Validation {
            path: solutions_path.display().to_string(),
            message: format!("solution {}: {e}", row + 1),
        })?;
        let v = verify_solution(eq, &x, tol)?;
        threshold = v.threshold;
        if !v.ok {
            failed += 1;
        }
        let _ = writeln!(
            text,
            "{:>6}  {:<4}  residual {:.3e}  selection {:?}",
            row + 1,
            if v.ok { "ok" } else { "FAIL" },
            v.residual,
            record.selection
        );
    }
    let total = file.solutions.len();
    let _ = writeln!(
        text,
        "{} of {total} solution(s) verified (threshold {threshold:.3e})",
        total - failed
    );
    Ok((text, failed == 0))
}

pub fn certify_text(report: &CertificationReport) -> String {
    let mut text = String::new();
    let bound = report
        .bound
        .map_or_else(|| "> 2^128".to_string(), |b| b.to_string());
    let _ = writeln!(text, "d = {}, n = {}", report.d, report.n);
    let _ = writeln!(
        text,
        "count = {}, n^d = {bound}, distinct roots per equation {:?}",
        count_line(report.count, &report.per_equation),
        report.per_equation
    );
    for check in &report.checks {
        let _ = writeln!(
            text,
            "[{}] {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        for w in &check.witnesses {
            let _ = writeln!(text, "       {w}");
        }
    }
    for g in &report.gaps {
        let gap = g
            .min_gap
            .map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
        let _ = writeln!(
            text,
            "equation {}: {} distinct, min gap {gap}, max spread {:.3e}, tol {:.3e}",
            g.equation, g.distinct, g.max_spread, g.tol_used
        );
    }
    let _ = writeln!(
        text,
        "{}",
        if report.passed() {
            "certified"
        } else {
            "NOT certified"
        }
    );
    text
}
