//! Dense iteration matrices and their spectral radii on small grids.
//!
//! The matrix is assembled by applying one solver sweep to each unit field,
//! so it shares no code with the formulas it is used to check.

pub mod eigen;

use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{BoundarySet, Field, GridSpec};
use crate::operator::DiscreteOperator;
use crate::solver::{Sor, SorVariant};
use crate::stencil::Scheme;

pub use eigen::{eigenvalues, DenseMatrix};

pub const MAX_UNKNOWNS: usize = 4096;
const VERIFY_FIELDS: usize = 5;
const VERIFY_TOLERANCE: f64 = 1e-12;

/// One homogeneous sweep as a dense matrix on the unknowns.
#[derive(Debug, Clone)]
pub struct SweepMatrix {
    pub matrix: DenseMatrix,
    /// Storage index of each unknown, in matrix order.
    pub points: Vec<usize>,
    pub omega: f64,
}

impl SweepMatrix {
    pub fn dim(&self) -> usize {
        self.points.len()
    }

    /// Gathers the unknowns of `field` in matrix order.
    pub fn gather(&self, field: &Field) -> Vec<f64> {
        self.points.iter().map(|&p| field.values()[p]).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(x)
    }
}

pub fn build_sweep_matrix(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
    omega: f64,
) -> Result<SweepMatrix> {
    bcs.ensure_solvable()?;
    let op = DiscreteOperator::new(grid, bcs, scheme)?;
    let count = op.unknown_count();
    if count > MAX_UNKNOWNS {
        return Err(Error::TooManyUnknowns { count, limit: MAX_UNKNOWNS });
    }
    let points: Vec<usize> = op.unknown_points().collect();
    let sor = Sor::new(op, variant);

    let columns: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&p| {
            let mut field = Field::zeros(grid, bcs);
            field.values_mut()[p] = 1.0;
            sor.sweep(&mut field, omega)?;
            Ok(points.iter().map(|&q| field.values()[q]).collect())
        })
        .collect::<Result<_>>()?;
    let mut matrix = DenseMatrix::zeros(count);
    for (k, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            matrix[(i, k)] = *v;
        }
    }
    let sweep = SweepMatrix { matrix, points, omega };

    let mut rng = StdRng::seed_from_u64(count as u64);
    for _ in 0..VERIFY_FIELDS {
        let mut field = Field::zeros(grid, bcs);
        for &p in &sweep.points {
            field.values_mut()[p] = rng.gen_range(-1.0..1.0);
        }
        let predicted = sweep.apply(&sweep.gather(&field));
        sor.sweep(&mut field, omega)?;
        let actual = sweep.gather(&field);
        let scale = actual.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let err = predicted.iter().zip(&actual).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
        if !(err <= VERIFY_TOLERANCE) {
            return Err(Error::SweepMatrixMismatch(err));
        }
    }
    Ok(sweep)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(matrix: &SweepMatrix) -> Result<f64> {
    Ok(eigenvalues(&matrix.matrix)?.iter().fold(0.0, |m, z| m.max(z.norm())))
}

pub fn spectral_radius_at(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
    omega: f64,
) -> Result<f64> {
    spectral_radius(&build_sweep_matrix(grid, bcs, scheme, variant, omega)?)
}

/// Spectral radius at every `omega` in `omegas`, evaluated in parallel.
pub fn radius_curve(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
    omegas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if let Some(&w) = omegas.iter().find(|w| !(**w > 0.0 && **w < 2.0)) {
        return Err(Error::InvalidOmega(w));
    }
    omegas
        .par_iter()
        .map(|&w| Ok((w, spectral_radius_at(grid, bcs, scheme, variant, w)?)))
        .collect()
}

/// Minimizer of the spectral radius over `omegas` and the radius there.
/// Ties go to the smallest `omega`.
pub fn brute_force_omega(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
    omegas: &[f64],
) -> Result<(f64, f64)> {
    let curve = radius_curve(grid, bcs, scheme, variant, omegas)?;
    curve
        .into_iter()
        .fold(None, |best: Option<(f64, f64)>, (w, r)| match best {
            Some((_, rb)) if rb <= r => best,
            _ => Some((w, r)),
        })
        .ok_or_else(|| Error::InvalidConfig("empty omega grid".into()))
}
