//! Extremal wavenumbers for each axis.
//!
//! For an edge pair `a u + b u' = 0` (low end) and `c u + d u' = 0` (high end)
//! the discrete eigenfunctions along the axis are `sin(k x + psi)` or
//! `sinh(k x + psi)`. Eliminating the phase `psi` leaves one characteristic
//! equation in `k` for each family. The hyperbolic family, when it has a
//! positive root, carries the slowest-decaying error mode.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::EdgeCondition;
use crate::omega::WavenumberMode;

/// Scan resolution per unit of `k`.
const SCAN_STEP: f64 = PI / 1024.0;
const BISECTION_TOLERANCE: f64 = 1e-12;
/// `|m + 1|` at or below this counts as zero.
const CRITICAL_TOLERANCE: f64 = 1e-12;
const INITIAL_K_MAX: f64 = 50.0;
/// Upper scan bound in units of `n_cells`; `sinh` overflows shortly after.
const K_MAX_CAP: f64 = 700.0;

/// Coefficients of the two edges along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinPair {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub n_cells: usize,
}

impl RobinPair {
    pub fn new(a: f64, b: f64, c: f64, d: f64, n_cells: usize) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidEdge(format!("non-finite coefficient in ({a}, {b}, {c}, {d})")));
        }
        if (a == 0.0 && b == 0.0) || (c == 0.0 && d == 0.0) {
            return Err(Error::InvalidEdge(format!(
                "an edge has both coefficients zero in ({a}, {b}, {c}, {d})"
            )));
        }
        if n_cells == 0 {
            return Err(Error::InvalidEdge("n_cells must be positive".into()));
        }
        Ok(Self { a, b, c, d, n_cells })
    }

    /// Encodes Dirichlet as `(1, 0)` and Neumann as `(0, 1)`.
    pub fn from_edges(low: EdgeCondition, high: EdgeCondition, n_cells: usize) -> Result<Self> {
        let (a, b) = low.normalized()?.coefficients();
        let (c, d) = high.normalized()?.coefficients();
        Self::new(a, b, c, d, n_cells)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `(m, n) = (ac, bd) / (ad - bc)`, absent when `ad = bc`.
    pub fn mn(&self) -> Option<(f64, f64)> {
        let det = self.det();
        (det != 0.0).then(|| (self.a * self.c / det, self.b * self.d / det))
    }

    fn n(&self) -> f64 {
        self.n_cells as f64
    }

    /// `(ac + s^2 bd) sin k + (ad - bc) s cos k` with `s = N sin(k / N)`.
    pub fn trig_residual(&self, k: f64) -> f64 {
        let n = self.n();
        let s = n * (k / n).sin();
        (self.a * self.c + s * s * self.b * self.d) * k.sin() + self.det() * s * k.cos()
    }

    /// `(ac - sh^2 bd) sinh k + (ad - bc) sh cosh k` with `sh = N sinh(k / N)`.
    pub fn hyper_residual(&self, k: f64) -> f64 {
        let n = self.n();
        let sh = n * (k / n).sinh();
        (self.a * self.c - sh * sh * self.b * self.d) * k.sinh() + self.det() * sh * k.cosh()
    }

    /// Hyperbolic equation divided by `(ad - bc) cosh k`:
    /// `(m - n sh^2) tanh k + sh`. Requires `ad != bc`.
    pub fn hyper_normalized(&self, k: f64) -> f64 {
        let (m, n) = self.mn().unwrap_or((f64::NAN, f64::NAN));
        let sh = self.n() * (k / self.n()).sinh();
        (m - n * sh * sh) * k.tanh() + sh
    }
}

/// Upper bound on the number of positive roots of the hyperbolic equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxPositiveRoots {
    Zero,
    One,
    AtMostOne,
    AtMostTwo,
}

impl MaxPositiveRoots {
    pub fn bound(self) -> usize {
        match self {
            Self::Zero => 0,
            Self::One | Self::AtMostOne => 1,
            Self::AtMostTwo => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootClassification {
    pub m: f64,
    pub n: f64,
    pub max_positive_roots: MaxPositiveRoots,
}

/// Root count of `(m - n sh^2) tanh k + sh = 0` from the signs of `n` and
/// `m + 1`. On `m + 1 = 0`, `k = 0` is a triple root and admissibility forces
/// `n <= 1/4`, so the curve leaves zero upward as when `m + 1 > 0`.
pub fn classify(m: f64, n: f64) -> Result<RootClassification> {
    if !(1.0 + 4.0 * m * n >= 0.0) {
        return Err(Error::Inadmissible { m, n });
    }
    let mp1 = m + 1.0;
    let max_positive_roots = if n > 0.0 {
        if mp1.abs() <= CRITICAL_TOLERANCE {
            MaxPositiveRoots::AtMostOne
        } else if mp1 > 0.0 {
            MaxPositiveRoots::One
        } else {
            MaxPositiveRoots::AtMostTwo
        }
    } else if mp1 < -CRITICAL_TOLERANCE {
        MaxPositiveRoots::One
    } else {
        MaxPositiveRoots::Zero
    };
    Ok(RootClassification { m, n, max_positive_roots })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `f` in `(0, end)` found by sign changes on the scan mesh.
fn scan_roots(f: impl Fn(f64) -> f64 + Copy, end: f64, first_only: bool) -> Vec<f64> {
    let steps = (end / SCAN_STEP).ceil() as usize;
    let mut roots = Vec::new();
    let mut k0 = SCAN_STEP.min(end);
    let mut f0 = f(k0);
    if f0 == 0.0 {
        roots.push(k0);
    }
    for i in 2..steps {
        let k1 = i as f64 * SCAN_STEP;
        let f1 = f(k1);
        if f1 == 0.0 {
            roots.push(k1);
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(f, k0, k1));
        }
        if first_only && !roots.is_empty() {
            break;
        }
        k0 = k1;
        f0 = f1;
    }
    roots
}

/// Smallest root of the trigonometric equation in `(0, pi N)`.
pub fn trig_wavenumber(pair: &RobinPair) -> Result<f64> {
    let end = PI * pair.n();
    scan_roots(|k| pair.trig_residual(k), end, true)
        .first()
        .copied()
        .ok_or_else(|| Error::NoRoot(format!("trigonometric equation for {pair:?}")))
}

/// Largest positive root of the hyperbolic equation, if any.
pub fn hyper_wavenumber(pair: &RobinPair) -> Option<f64> {
    let n = pair.n();
    let Some((m, nn)) = pair.mn() else {
        let all_nonzero = [pair.a, pair.b, pair.c, pair.d].iter().all(|v| *v != 0.0);
        return all_nonzero.then(|| n * ((pair.a / pair.b).abs() / n).asinh());
    };
    let dominated = |k: f64| {
        let sh = n * (k / n).sinh();
        if nn == 0.0 {
            sh > 2.0 * m.abs()
        } else {
            nn.abs() * sh * sh * k.tanh() > 2.0 * (m.abs() + sh)
        }
    };
    let cap = K_MAX_CAP * n;
    let mut k_max = INITIAL_K_MAX.min(cap);
    while !dominated(k_max) && k_max < cap {
        k_max = (2.0 * k_max).min(cap);
    }
    scan_roots(|k| pair.hyper_normalized(k), k_max + SCAN_STEP, false).last().copied()
}

/// Extremal mode for the edge pair `(low, high)` along an axis of `n_cells`
/// cells.
pub fn select_wavenumber(low: EdgeCondition, high: EdgeCondition, n_cells: usize) -> Result<WavenumberMode> {
    use EdgeCondition::{Dirichlet, Neumann};
    let low = low.normalized()?;
    let high = high.normalized()?;
    match (low, high) {
        (Dirichlet, Dirichlet) => return Ok(WavenumberMode::Trig(PI)),
        (Dirichlet, Neumann) | (Neumann, Dirichlet) => return Ok(WavenumberMode::Trig(PI / 2.0)),
        (Neumann, Neumann) => return Ok(WavenumberMode::Zero),
        _ => {}
    }
    let pair = RobinPair::from_edges(low, high, n_cells)?;
    if let Some(k) = hyper_wavenumber(&pair) {
        return Ok(WavenumberMode::Hyper(k));
    }
    if let Some((m, _)) = pair.mn() {
        if (m + 1.0).abs() <= CRITICAL_TOLERANCE {
            // a linear function satisfies both edges
            return Ok(WavenumberMode::Zero);
        }
    }
    trig_wavenumber(&pair).map(WavenumberMode::Trig)
}
