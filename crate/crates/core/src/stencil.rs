//! Stencil coefficients and ghost-node closures.
//!
//! Both schemes are written after multiplying through by `dx^2`:
//!
//! ```text
//! Central2:  (W + E) + b^2 (S + N) - 2(1 + b^2) C
//! Hoc:       (10 - 2b^2)(W + E) + (10b^2 - 2)(S + N)
//!            + (1 + b^2)(SW + SE + NW + NE - 20 C)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{EdgeCondition, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Five-point second-order central differences.
    Central2,
    /// Nine-point fourth-order compact scheme.
    Hoc,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Central2 => "central2",
            Scheme::Hoc => "hoc",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "central2" => Ok(Scheme::Central2),
            "hoc" => Ok(Scheme::Hoc),
            other => Err(Error::Parse(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilWeights {
    pub center: f64,
    pub east: f64,
    pub west: f64,
    pub north: f64,
    pub south: f64,
    pub north_east: f64,
    pub north_west: f64,
    pub south_east: f64,
    pub south_west: f64,
}

impl StencilWeights {
    /// `(di, dj, weight)` for every non-zero off-center entry.
    pub fn neighbors(&self) -> impl Iterator<Item = (isize, isize, f64)> {
        [
            (-1, -1, self.south_west),
            (0, -1, self.south),
            (1, -1, self.south_east),
            (-1, 0, self.west),
            (1, 0, self.east),
            (-1, 1, self.north_west),
            (0, 1, self.north),
            (1, 1, self.north_east),
        ]
        .into_iter()
        .filter(|&(_, _, w)| w != 0.0)
    }

    pub fn sum(&self) -> f64 {
        self.center
            + self.east
            + self.west
            + self.north
            + self.south
            + self.north_east
            + self.north_west
            + self.south_east
            + self.south_west
    }
}

pub fn weights(scheme: Scheme, beta: f64) -> StencilWeights {
    let b2 = beta * beta;
    match scheme {
        Scheme::Central2 => StencilWeights {
            center: -2.0 * (1.0 + b2),
            east: 1.0,
            west: 1.0,
            north: b2,
            south: b2,
            north_east: 0.0,
            north_west: 0.0,
            south_east: 0.0,
            south_west: 0.0,
        },
        Scheme::Hoc => {
            let corner = 1.0 + b2;
            StencilWeights {
                center: -20.0 * corner,
                east: 10.0 - 2.0 * b2,
                west: 10.0 - 2.0 * b2,
                north: 10.0 * b2 - 2.0,
                south: 10.0 * b2 - 2.0,
                north_east: corner,
                north_west: corner,
                south_east: corner,
                south_west: corner,
            }
        }
    }
}

/// Value at the ghost node one step outside an edge, from the centered
/// discretization of the edge condition.
///
/// `inner_value` is the mirror point one step inside, `boundary_value` the
/// point on the edge. On a high edge `c u + d u' = 0` gives
/// `u[N+1] = u[N-1] - (2 h c / d) u[N]`; on a low edge `a u + b u' = 0` gives
/// `u[-1] = u[1] + (2 h a / b) u[0]`.
pub fn ghost_value(
    edge: EdgeCondition,
    side: Side,
    inner_value: f64,
    boundary_value: f64,
    spacing: f64,
) -> Result<f64> {
    match edge {
        EdgeCondition::Dirichlet => Err(Error::GhostUndefined("Dirichlet")),
        EdgeCondition::Neumann => Ok(inner_value),
        EdgeCondition::Robin { coef_du, .. } if coef_du == 0.0 => {
            Err(Error::GhostUndefined("Robin edge with zero derivative coefficient"))
        }
        EdgeCondition::Robin { coef_u, coef_du } => {
            let k = 2.0 * spacing * coef_u / coef_du;
            Ok(match side {
                Side::Low => inner_value + k * boundary_value,
                Side::High => inner_value - k * boundary_value,
            })
        }
    }
}

/// Ghost value as an affine combination `inner * u_inner + boundary * u_edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GhostClosure {
    pub inner: f64,
    pub boundary: f64,
}

impl GhostClosure {
    pub fn new(edge: EdgeCondition, side: Side, spacing: f64) -> Result<Self> {
        Ok(Self {
            inner: ghost_value(edge, side, 1.0, 0.0, spacing)?,
            boundary: ghost_value(edge, side, 0.0, 1.0, spacing)?,
        })
    }
}
