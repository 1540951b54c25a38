//! Assembled discrete operator: one equation per unknown, ghost nodes
//! eliminated.
//!
//! Every stencil entry that falls outside the grid is rewritten through the
//! edge's ghost closure until it lands on stored points. Contributions that
//! come back onto the equation's own point are folded into its diagonal, so
//! the sweeps below are plain Gauss-Seidel/SOR on the eliminated system.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::{BoundarySet, EdgeCondition, Field, GridSpec, Side};
use crate::solver::tridiag::thomas_in_place;
use crate::stencil::{weights, GhostClosure, Scheme};

/// One equation `diag*u[p] + lower*u[p-1] + upper*u[p+1] + sum(terms) = rhs`.
///
/// `lower`/`upper` couple unknowns in the same grid row; `terms` holds every
/// other contribution, including fixed boundary points.
#[derive(Debug, Clone)]
pub(crate) struct Equation {
    pub point: usize,
    pub diag: f64,
    pub lower: f64,
    pub upper: f64,
    pub rhs: f64,
    pub terms: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: GridSpec,
    bcs: BoundarySet,
    scheme: Scheme,
    eqs: Vec<Equation>,
    coupling: Vec<(usize, f64)>,
    /// Equation ranges sharing one grid row, bottom to top.
    rows: Vec<Range<usize>>,
}

struct Closures {
    left: Option<GhostClosure>,
    right: Option<GhostClosure>,
    bottom: Option<GhostClosure>,
    top: Option<GhostClosure>,
}

fn closure(edge: EdgeCondition, side: Side, h: f64) -> Result<Option<GhostClosure>> {
    match edge {
        EdgeCondition::Dirichlet => Ok(None),
        e => GhostClosure::new(e, side, h).map(Some),
    }
}

impl DiscreteOperator {
    pub fn new(grid: &GridSpec, bcs: &BoundarySet, scheme: Scheme) -> Result<Self> {
        let bcs = BoundarySet::new(bcs.left, bcs.right, bcs.bottom, bcs.top)?;
        let closures = Closures {
            left: closure(bcs.left, Side::Low, grid.dx)?,
            right: closure(bcs.right, Side::High, grid.dx)?,
            bottom: closure(bcs.bottom, Side::Low, grid.dy)?,
            top: closure(bcs.top, Side::High, grid.dy)?,
        };
        let stencil = weights(scheme, grid.beta);
        let mut eqs = Vec::new();
        let mut coupling = Vec::new();
        let mut rows = Vec::new();

        for j in 0..=grid.ny {
            let start = eqs.len();
            for i in 0..=grid.nx {
                if bcs.is_fixed(grid, i, j) {
                    continue;
                }
                let point = grid.index(i, j);
                let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                for (di, dj, w) in stencil.neighbors() {
                    resolve(grid, &closures, i as isize + di, j as isize + dj, w, &mut acc);
                }
                let diag = stencil.center + acc.remove(&point).unwrap_or(0.0);
                let mut lower = 0.0;
                let mut upper = 0.0;
                if i > 0 && !bcs.is_fixed(grid, i - 1, j) {
                    lower = acc.remove(&(point - 1)).unwrap_or(0.0);
                }
                if i < grid.nx && !bcs.is_fixed(grid, i + 1, j) {
                    upper = acc.remove(&(point + 1)).unwrap_or(0.0);
                }
                if diag == 0.0 {
                    return Err(Error::InvalidEdge(format!(
                        "boundary closure makes the diagonal vanish at ({i}, {j})"
                    )));
                }
                let t0 = coupling.len();
                coupling.extend(acc.into_iter().filter(|&(_, c)| c != 0.0));
                eqs.push(Equation {
                    point,
                    diag,
                    lower,
                    upper,
                    rhs: 0.0,
                    terms: t0..coupling.len(),
                });
            }
            if eqs.len() > start {
                rows.push(start..eqs.len());
            }
        }

        Ok(Self {
            grid: *grid,
            bcs,
            scheme,
            eqs,
            coupling,
            rows,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn boundaries(&self) -> &BoundarySet {
        &self.bcs
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn unknown_count(&self) -> usize {
        self.eqs.len()
    }

    /// Storage indices of the unknowns in sweep order.
    pub fn unknown_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.eqs.iter().map(|e| e.point)
    }

    /// Sets the right-hand side from a source `f` sampled on every grid point.
    ///
    /// Points outside the grid needed by the compact right-hand side are
    /// taken from the nearest stored point.
    pub fn set_source(&mut self, source: &[f64]) -> Result<()> {
        let g = self.grid;
        if source.len() != g.len() {
            return Err(Error::ShapeMismatch {
                expected: (g.nx + 1, g.ny + 1),
                found: (source.len(), 1),
            });
        }
        let h2 = g.dx * g.dx;
        let w = g.nx + 1;
        for eq in &mut self.eqs {
            let (i, j) = (eq.point % w, eq.point / w);
            eq.rhs = match self.scheme {
                Scheme::Central2 => h2 * source[eq.point],
                Scheme::Hoc => {
                    let at = |i: usize, j: usize| source[g.index(i.min(g.nx), j.min(g.ny))];
                    h2 * (8.0 * at(i, j)
                        + at(i.saturating_sub(1), j)
                        + at(i + 1, j)
                        + at(i, j.saturating_sub(1))
                        + at(i, j + 1))
                }
            };
        }
        Ok(())
    }

    fn check(&self, field: &Field) -> Result<()> {
        let g = field.grid();
        if g.nx != self.grid.nx || g.ny != self.grid.ny {
            return Err(Error::ShapeMismatch {
                expected: (self.grid.nx + 1, self.grid.ny + 1),
                found: (g.nx + 1, g.ny + 1),
            });
        }
        Ok(())
    }

    #[inline]
    fn off_row(&self, eq: &Equation, v: &[f64]) -> f64 {
        self.coupling[eq.terms.clone()]
            .iter()
            .map(|&(k, c)| c * v[k])
            .sum()
    }

    #[inline]
    fn neighbors(eq: &Equation, v: &[f64]) -> f64 {
        let mut s = 0.0;
        if eq.lower != 0.0 {
            s += eq.lower * v[eq.point - 1];
        }
        if eq.upper != 0.0 {
            s += eq.upper * v[eq.point + 1];
        }
        s
    }

    /// Residual `rhs - A u` on every unknown, in sweep order.
    pub fn residual(&self, field: &Field) -> Result<Vec<f64>> {
        self.check(field)?;
        let v = field.values();
        Ok(self
            .eqs
            .iter()
            .map(|eq| eq.rhs - eq.diag * v[eq.point] - Self::neighbors(eq, v) - self.off_row(eq, v))
            .collect())
    }

    /// One point-SOR sweep in natural row-wise order.
    pub fn point_sweep(&self, field: &mut Field, omega: f64) -> Result<()> {
        self.check(field)?;
        let v = field.values_mut();
        for eq in &self.eqs {
            let gs = (eq.rhs - Self::neighbors(eq, v) - self.off_row(eq, v)) / eq.diag;
            let old = v[eq.point];
            v[eq.point] = (1.0 - omega) * old + omega * gs;
        }
        Ok(())
    }

    /// One line-SOR sweep, rows bottom to top, each row solved as a
    /// tridiagonal system with the relaxation folded into its right-hand side.
    pub fn line_sweep(&self, field: &mut Field, omega: f64) -> Result<()> {
        self.check(field)?;
        let longest = self.rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut lower = vec![0.0; longest];
        let mut diag = vec![0.0; longest];
        let mut upper = vec![0.0; longest];
        let mut rhs = vec![0.0; longest];
        let mut scratch = vec![0.0; longest];
        let v = field.values_mut();
        for row in &self.rows {
            let n = row.len();
            for (l, eq) in self.eqs[row.clone()].iter().enumerate() {
                lower[l] = eq.lower;
                diag[l] = eq.diag;
                upper[l] = eq.upper;
                let in_row = eq.diag * v[eq.point] + Self::neighbors(eq, v);
                rhs[l] = (1.0 - omega) * in_row + omega * (eq.rhs - self.off_row(eq, v));
            }
            let first = self.eqs[row.start].point;
            thomas_in_place(
                &lower[..n],
                &diag[..n],
                &upper[..n],
                &mut rhs[..n],
                &mut scratch[..n],
            )?;
            v[first..first + n].copy_from_slice(&rhs[..n]);
        }
        Ok(())
    }
}

fn resolve(
    grid: &GridSpec,
    closures: &Closures,
    i: isize,
    j: isize,
    coef: f64,
    acc: &mut BTreeMap<usize, f64>,
) {
    if coef == 0.0 {
        return;
    }
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mirror = |c: Option<GhostClosure>| {
        c.expect("stencil reached past a Dirichlet edge from an unknown point")
    };
    if i < 0 {
        let c = mirror(closures.left);
        resolve(grid, closures, -i, j, coef * c.inner, acc);
        resolve(grid, closures, 0, j, coef * c.boundary, acc);
    } else if i > nx {
        let c = mirror(closures.right);
        resolve(grid, closures, 2 * nx - i, j, coef * c.inner, acc);
        resolve(grid, closures, nx, j, coef * c.boundary, acc);
    } else if j < 0 {
        let c = mirror(closures.bottom);
        resolve(grid, closures, i, -j, coef * c.inner, acc);
        resolve(grid, closures, i, 0, coef * c.boundary, acc);
    } else if j > ny {
        let c = mirror(closures.top);
        resolve(grid, closures, i, 2 * ny - j, coef * c.inner, acc);
        resolve(grid, closures, i, ny, coef * c.boundary, acc);
    } else {
        *acc.entry(grid.index(i as usize, j as usize)).or_insert(0.0) += coef;
    }
}
