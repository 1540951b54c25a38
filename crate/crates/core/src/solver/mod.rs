//! Point and line SOR with the zero-solution convergence protocol.
//!
//! With zero source and zero boundary data the exact solution is zero, so the
//! iterate itself is the error. Runs start from ones on every unknown and stop
//! once the 2-norm of the whole field drops below the tolerance.

pub mod tridiag;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{initial_guess, l2_norm, BoundarySet, Field, GridSpec};
use crate::operator::DiscreteOperator;
use crate::stencil::Scheme;

pub use tridiag::tridiagonal_solve;

/// `(2^-52)^4`, exactly.
pub const DEFAULT_TOLERANCE: f64 = f64::EPSILON * f64::EPSILON * f64::EPSILON * f64::EPSILON;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;
/// Norm above which a run is declared divergent.
pub const DIVERGENCE_NORM: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SorVariant {
    PointSor,
    LineSor,
}

impl fmt::Display for SorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SorVariant::PointSor => "point",
            SorVariant::LineSor => "line",
        })
    }
}

impl FromStr for SorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "point" => Ok(SorVariant::PointSor),
            "line" => Ok(SorVariant::LineSor),
            other => Err(Error::Parse(format!("unknown SOR variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub variant: SorVariant,
    pub omega: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl SolverConfig {
    pub fn new(scheme: Scheme, variant: SorVariant, omega: f64) -> Result<Self> {
        let config = Self {
            scheme,
            variant,
            omega,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        self.tolerance = tolerance;
        self.validate()?;
        Ok(self)
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Result<Self> {
        self.max_iterations = max_iterations;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return Err(Error::InvalidOmega(self.omega));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_norm: f64,
    pub converged: bool,
}

/// Sweeps an assembled operator with a fixed variant and relaxation factor.
#[derive(Debug, Clone)]
pub struct Sor {
    operator: DiscreteOperator,
    variant: SorVariant,
}

impl Sor {
    pub fn new(operator: DiscreteOperator, variant: SorVariant) -> Self {
        Self { operator, variant }
    }

    pub fn operator(&self) -> &DiscreteOperator {
        &self.operator
    }

    pub fn sweep(&self, field: &mut Field, omega: f64) -> Result<()> {
        match self.variant {
            SorVariant::PointSor => self.operator.point_sweep(field, omega),
            SorVariant::LineSor => self.operator.line_sweep(field, omega),
        }
    }

    /// Sweeps `field` until its norm drops below `tolerance`, the iteration
    /// budget runs out, or the norm exceeds [`DIVERGENCE_NORM`]. Never fails
    /// on non-convergence; check `converged`.
    pub fn iterate(
        &self,
        field: &mut Field,
        omega: f64,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<SolveReport> {
        let mut final_norm = l2_norm(field);
        for it in 1..=max_iterations {
            self.sweep(field, omega)?;
            final_norm = l2_norm(field);
            if final_norm < tolerance {
                return Ok(SolveReport { iterations: it, final_norm, converged: true });
            }
            if !(final_norm <= DIVERGENCE_NORM) {
                return Ok(SolveReport { iterations: it, final_norm, converged: false });
            }
        }
        Ok(SolveReport { iterations: max_iterations, final_norm, converged: false })
    }
}

pub fn point_sor_sweep(
    field: &mut Field,
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    omega: f64,
) -> Result<()> {
    DiscreteOperator::new(grid, bcs, scheme)?.point_sweep(field, omega)
}

pub fn line_sor_sweep(
    field: &mut Field,
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    omega: f64,
) -> Result<()> {
    DiscreteOperator::new(grid, bcs, scheme)?.line_sweep(field, omega)
}

/// Runs the protocol from the all-ones guess and reports the outcome,
/// converged or not.
pub fn run(grid: &GridSpec, bcs: &BoundarySet, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    bcs.ensure_solvable()?;
    let sor = Sor::new(DiscreteOperator::new(grid, bcs, config.scheme)?, config.variant);
    let mut field = initial_guess(grid, bcs);
    sor.iterate(&mut field, config.omega, config.tolerance, config.max_iterations)
}

/// Like [`run`], but a run that does not converge is an error.
pub fn solve(grid: &GridSpec, bcs: &BoundarySet, config: &SolverConfig) -> Result<SolveReport> {
    let report = run(grid, bcs, config)?;
    if report.converged {
        Ok(report)
    } else if !(report.final_norm <= DIVERGENCE_NORM) {
        Err(Error::Diverged { iterations: report.iterations, final_norm: report.final_norm })
    } else {
        Err(Error::NotConverged { iterations: report.iterations, final_norm: report.final_norm })
    }
}
