//! Optimal relaxation parameters.
//!
//! Every method except HOC point SOR leads to the quadratic
//! `a^2 - r w a + w - 1 = 0` for the square root `a` of an SOR eigenvalue.
//! The optimum is where its discriminant vanishes, giving
//! `w = 2 / (1 + sqrt(1 - r^2))` with spectral radius `w - 1`. Only `r`
//! changes with the scheme, the variant and the boundary wavenumbers.
//!
//! HOC point SOR leads to a quartic instead; see [`hoc`].

pub mod hoc;
pub mod quartic;

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{BoundarySet, GridSpec};
use crate::robin::select_wavenumber;
use crate::solver::SorVariant;
use crate::stencil::Scheme;

pub use hoc::{hoc_constants, omega_point_hoc, HocConstants};
pub use quartic::{quartic_coefficients, quartic_moduli, quartic_roots};

/// Extremal mode selected by the boundary conditions along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WavenumberMode {
    /// `sin(k x + psi)` modes; contributes `cos(k h)`.
    Trig(f64),
    /// `sinh(k x + psi)` modes; contributes `cosh(k h)`.
    Hyper(f64),
    /// The constant mode; contributes 1.
    Zero,
}

impl WavenumberMode {
    /// `cos(k h)`, `cosh(k h)` or 1.
    pub fn factor(&self, spacing: f64) -> f64 {
        match *self {
            Self::Trig(k) => (k * spacing).cos(),
            Self::Hyper(k) => (k * spacing).cosh(),
            Self::Zero => 1.0,
        }
    }

    /// `k^2`, negated for hyperbolic modes.
    pub fn signed_square(&self) -> f64 {
        match *self {
            Self::Trig(k) => k * k,
            Self::Hyper(k) => -k * k,
            Self::Zero => 0.0,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        match *self {
            Self::Trig(k) | Self::Hyper(k) => k,
            Self::Zero => 0.0,
        }
    }
}

impl fmt::Display for WavenumberMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trig(k) => write!(f, "trig({k:.16e})"),
            Self::Hyper(k) => write!(f, "hyper({k:.16e})"),
            Self::Zero => f.write_str("zero"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPrediction {
    pub omega_opt: f64,
    pub predicted_spectral_radius: Option<f64>,
    /// Set when the radius comes from a truncated expansion.
    pub approximate: bool,
}

/// `r` for second-order point SOR.
pub fn r_point_2nd(kx: WavenumberMode, ky: WavenumberMode, grid: &GridSpec) -> f64 {
    let b2 = grid.beta2();
    (kx.factor(grid.dx) + b2 * ky.factor(grid.dy)) / (1.0 + b2)
}

/// `r` for second-order line SOR (rows solved implicitly).
pub fn r_line_2nd(kx: WavenumberMode, ky: WavenumberMode, grid: &GridSpec) -> Result<f64> {
    let b2 = grid.beta2();
    let den = 1.0 + b2 - kx.factor(grid.dx);
    if !(den > 0.0) {
        return Err(Error::InvalidMode(format!(
            "line-SOR denominator 1 + b^2 - C(kx) = {den} for kx = {kx}"
        )));
    }
    Ok(b2 * ky.factor(grid.dy) / den)
}

/// `r` for HOC line SOR.
pub fn r_line_hoc(kx: WavenumberMode, ky: WavenumberMode, grid: &GridSpec) -> Result<f64> {
    let b2 = grid.beta2();
    let cx = kx.factor(grid.dx);
    let den = 5.0 * (1.0 + b2) - (5.0 - b2) * cx;
    if !(den > 0.0) {
        return Err(Error::InvalidMode(format!(
            "HOC line-SOR denominator {den} for kx = {kx}"
        )));
    }
    Ok((5.0 * b2 - 1.0 + (1.0 + b2) * cx) / den * ky.factor(grid.dy))
}

/// Optimal factor for the quadratic family, with spectral radius `w - 1`.
pub fn omega_from_r(r: f64) -> Result<OmegaPrediction> {
    if !(r.abs() < 1.0) {
        return Err(Error::NonConvergent { r });
    }
    let omega_opt = 2.0 / (1.0 + (1.0 - r * r).sqrt());
    Ok(OmegaPrediction {
        omega_opt,
        predicted_spectral_radius: Some(omega_opt - 1.0),
        approximate: false,
    })
}

/// How the prediction was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictionDetail {
    Quadratic { r: f64 },
    HocPoint(HocConstants),
}

/// Everything behind a prediction: resolved modes, intermediate quantities
/// and the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub kx: WavenumberMode,
    pub ky: WavenumberMode,
    pub detail: PredictionDetail,
    pub omega: OmegaPrediction,
}

/// Resolves the wavenumbers of both axes and evaluates the matching formula.
pub fn predict_detailed(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
) -> Result<Prediction> {
    let bcs = BoundarySet::new(bcs.left, bcs.right, bcs.bottom, bcs.top)?;
    if !bcs.is_solvable() {
        // every wavenumber is zero: r = 1
        return Err(Error::NonConvergent { r: 1.0 });
    }
    let kx = select_wavenumber(bcs.left, bcs.right, grid.nx)?;
    let ky = select_wavenumber(bcs.bottom, bcs.top, grid.ny)?;
    let (detail, omega) = match (scheme, variant) {
        (Scheme::Central2, SorVariant::PointSor) => quadratic(r_point_2nd(kx, ky, grid))?,
        (Scheme::Central2, SorVariant::LineSor) => quadratic(r_line_2nd(kx, ky, grid)?)?,
        (Scheme::Hoc, SorVariant::LineSor) => quadratic(r_line_hoc(kx, ky, grid)?)?,
        (Scheme::Hoc, SorVariant::PointSor) => {
            let c = hoc_constants(kx, ky, grid)?;
            (PredictionDetail::HocPoint(c), c.prediction()?)
        }
    };
    Ok(Prediction { kx, ky, detail, omega })
}

fn quadratic(r: f64) -> Result<(PredictionDetail, OmegaPrediction)> {
    Ok((PredictionDetail::Quadratic { r }, omega_from_r(r)?))
}

pub fn predict(
    grid: &GridSpec,
    bcs: &BoundarySet,
    scheme: Scheme,
    variant: SorVariant,
) -> Result<OmegaPrediction> {
    predict_detailed(grid, bcs, scheme, variant).map(|p| p.omega)
}
