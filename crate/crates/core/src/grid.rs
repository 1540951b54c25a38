//! Grid geometry, boundary descriptions and field storage on the unit square.
//!
//! Points are `(i, j)` with `0 <= i <= nx`, `0 <= j <= ny`. Fields are stored
//! row-major with `j` as the slow axis, so one grid row is a contiguous slice.

use std::fmt;

use crate::error::{Error, Result};

/// Uniform grid on `[0,1] x [0,1]` with `nx` by `ny` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// Aspect ratio `dx / dy`.
    pub beta: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 {
            return Err(Error::DimensionTooSmall { axis: 'x', cells: nx });
        }
        if ny < 3 {
            return Err(Error::DimensionTooSmall { axis: 'y', cells: ny });
        }
        Ok(Self {
            nx,
            ny,
            dx: 1.0 / nx as f64,
            dy: 1.0 / ny as f64,
            beta: ny as f64 / nx as f64,
        })
    }

    /// Perturbation parameter `h`, equal to `dx`.
    pub fn h(&self) -> f64 {
        self.dx
    }

    pub fn beta2(&self) -> f64 {
        self.beta * self.beta
    }

    /// Number of stored points, `(nx + 1) * (ny + 1)`.
    pub fn len(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }
}

/// Shorthand for [`GridSpec::new`].
pub fn make_grid(nx: usize, ny: usize) -> Result<GridSpec> {
    GridSpec::new(nx, ny)
}

/// Which end of an axis an edge sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Left (`x = 0`) or bottom (`y = 0`).
    Low,
    /// Right (`x = 1`) or top (`y = 1`).
    High,
}

/// Homogeneous condition on one edge.
///
/// `Robin { coef_u, coef_du }` stands for `coef_u * u + coef_du * du/dx = 0`
/// on the left/right edges and `coef_u * u + coef_du * du/dy = 0` on the
/// bottom/top edges. The derivative is along the positive axis, not the
/// outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeCondition {
    Dirichlet,
    Neumann,
    Robin { coef_u: f64, coef_du: f64 },
}

impl EdgeCondition {
    /// Builds a Robin edge, folding the degenerate cases into Dirichlet
    /// (`coef_du == 0`) or Neumann (`coef_u == 0`).
    pub fn robin(coef_u: f64, coef_du: f64) -> Result<Self> {
        if !coef_u.is_finite() || !coef_du.is_finite() {
            return Err(Error::InvalidEdge(format!(
                "non-finite Robin coefficients ({coef_u}, {coef_du})"
            )));
        }
        match (coef_u == 0.0, coef_du == 0.0) {
            (true, true) => Err(Error::InvalidEdge(
                "Robin coefficients cannot both be zero".into(),
            )),
            (false, true) => Ok(Self::Dirichlet),
            (true, false) => Ok(Self::Neumann),
            (false, false) => Ok(Self::Robin { coef_u, coef_du }),
        }
    }

    /// Re-applies the normalization of [`EdgeCondition::robin`].
    pub fn normalized(self) -> Result<Self> {
        match self {
            Self::Robin { coef_u, coef_du } => Self::robin(coef_u, coef_du),
            other => Ok(other),
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Self::Dirichlet)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dirichlet => "Dirichlet",
            Self::Neumann => "Neumann",
            Self::Robin { .. } => "Robin",
        }
    }

    /// `(coefficient of u, coefficient of du)`, with Dirichlet as `(1, 0)`
    /// and Neumann as `(0, 1)`.
    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            Self::Dirichlet => (1.0, 0.0),
            Self::Neumann => (0.0, 1.0),
            Self::Robin { coef_u, coef_du } => (coef_u, coef_du),
        }
    }
}

impl fmt::Display for EdgeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dirichlet => f.write_str("dirichlet"),
            Self::Neumann => f.write_str("neumann"),
            Self::Robin { coef_u, coef_du } => write!(f, "robin:{coef_u},{coef_du}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySet {
    pub left: EdgeCondition,
    pub right: EdgeCondition,
    pub bottom: EdgeCondition,
    pub top: EdgeCondition,
}

impl BoundarySet {
    pub fn new(
        left: EdgeCondition,
        right: EdgeCondition,
        bottom: EdgeCondition,
        top: EdgeCondition,
    ) -> Result<Self> {
        Ok(Self {
            left: left.normalized()?,
            right: right.normalized()?,
            bottom: bottom.normalized()?,
            top: top.normalized()?,
        })
    }

    pub fn dirichlet() -> Self {
        Self::uniform(EdgeCondition::Dirichlet)
    }

    pub fn uniform(edge: EdgeCondition) -> Self {
        Self {
            left: edge,
            right: edge,
            bottom: edge,
            top: edge,
        }
    }

    pub fn with_left(mut self, edge: EdgeCondition) -> Self {
        self.left = edge;
        self
    }

    pub fn with_right(mut self, edge: EdgeCondition) -> Self {
        self.right = edge;
        self
    }

    pub fn with_bottom(mut self, edge: EdgeCondition) -> Self {
        self.bottom = edge;
        self
    }

    pub fn with_top(mut self, edge: EdgeCondition) -> Self {
        self.top = edge;
        self
    }

    /// False when every edge is Neumann.
    pub fn is_solvable(&self) -> bool {
        ![self.left, self.right, self.bottom, self.top]
            .iter()
            .all(|e| matches!(e, EdgeCondition::Neumann))
    }

    pub fn ensure_solvable(&self) -> Result<()> {
        if self.is_solvable() {
            Ok(())
        } else {
            Err(Error::NonSolvable)
        }
    }

    /// Whether `(i, j)` is held fixed. Corners shared by a Dirichlet edge and
    /// any other edge are fixed.
    pub fn is_fixed(&self, grid: &GridSpec, i: usize, j: usize) -> bool {
        (i == 0 && self.left.is_dirichlet())
            || (i == grid.nx && self.right.is_dirichlet())
            || (j == 0 && self.bottom.is_dirichlet())
            || (j == grid.ny && self.top.is_dirichlet())
    }

    /// Unknown mask in storage order.
    pub fn unknown_mask(&self, grid: &GridSpec) -> Vec<bool> {
        let mut mask = vec![false; grid.len()];
        for j in 0..=grid.ny {
            for i in 0..=grid.nx {
                mask[grid.index(i, j)] = !self.is_fixed(grid, i, j);
            }
        }
        mask
    }
}

/// Grid function with its unknown mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<f64>,
    unknown: Vec<bool>,
}

impl Field {
    pub fn zeros(grid: &GridSpec, bcs: &BoundarySet) -> Self {
        Self {
            grid: *grid,
            values: vec![0.0; grid.len()],
            unknown: bcs.unknown_mask(grid),
        }
    }

    pub fn from_values(grid: &GridSpec, bcs: &BoundarySet, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: (grid.nx + 1, grid.ny + 1),
                found: (values.len(), 1),
            });
        }
        Ok(Self {
            grid: *grid,
            values,
            unknown: bcs.unknown_mask(grid),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn unknown_mask(&self) -> &[bool] {
        &self.unknown
    }

    pub fn is_unknown(&self, i: usize, j: usize) -> bool {
        self.unknown[self.grid.index(i, j)]
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown.iter().filter(|&&u| u).count()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.grid.index(i, j);
        self.values[k] = value;
    }

    /// Row `j` as a contiguous slice.
    pub fn row(&self, j: usize) -> &[f64] {
        let w = self.grid.nx + 1;
        &self.values[j * w..(j + 1) * w]
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(self)
    }
}

/// Ones on every unknown, zeros on fixed points.
pub fn initial_guess(grid: &GridSpec, bcs: &BoundarySet) -> Field {
    let mut field = Field::zeros(grid, bcs);
    for (v, &u) in field.values.iter_mut().zip(&field.unknown) {
        if u {
            *v = 1.0;
        }
    }
    field
}

/// Euclidean norm over every stored point.
pub fn l2_norm(field: &Field) -> f64 {
    field.values.iter().map(|v| v * v).sum::<f64>().sqrt()
}
