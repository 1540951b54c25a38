//! Second-order perturbation estimate of the optimal factor for HOC point SOR.
//!
//! With `h = dx`, `w = 2 - k1 h - k2 h^2`. `k1` balances the decay rates of
//! the largest real root and the largest complex pair of the quartic; `k2`
//! balances their second-order corrections.

use crate::error::{Error, Result};
use crate::grid::GridSpec;

use super::{OmegaPrediction, WavenumberMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HocConstants {
    pub h: f64,
    /// `(5 - b^2) / (10 (1 + b^2))`, always in `(-1/10, 1/2)`.
    pub c1: f64,
    pub c2: f64,
    /// `C(kx, dx)`.
    pub p: f64,
    /// `C(ky, dy)`.
    pub q: f64,
    /// `delta(kx, ky) = sqrt(4/5 (1 + 8 c1)(+-kx^2 + ky^2))`.
    pub delta_kk: f64,
    pub delta_prime: f64,
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// `sqrt(k1^2 - delta^2)`.
    pub r_k: f64,
    pub beta_m: f64,
    pub gamma_m: f64,
}

impl HocConstants {
    pub fn omega_first_order(&self) -> f64 {
        2.0 - self.k1 * self.h
    }

    pub fn omega_second_order(&self) -> f64 {
        2.0 - self.k1 * self.h - self.k2 * self.h * self.h
    }

    /// Truncated expansion `1 - 2 beta_m h - 2 gamma_m h^2` of the largest
    /// eigenvalue modulus at the second-order optimum.
    pub fn predicted_spectral_radius(&self) -> f64 {
        1.0 - 2.0 * self.beta_m * self.h - 2.0 * self.gamma_m * self.h * self.h
    }

    pub fn prediction(&self) -> Result<OmegaPrediction> {
        let omega_opt = self.omega_second_order();
        if !(omega_opt > 0.0 && omega_opt < 2.0) {
            return Err(Error::FormulaDomain(format!(
                "second-order estimate {omega_opt} is outside (0, 2)"
            )));
        }
        Ok(OmegaPrediction {
            omega_opt,
            predicted_spectral_radius: Some(self.predicted_spectral_radius()),
            approximate: true,
        })
    }
}

pub fn hoc_constants(kx: WavenumberMode, ky: WavenumberMode, grid: &GridSpec) -> Result<HocConstants> {
    let h = grid.h();
    let b2 = grid.beta2();
    let p = kx.factor(grid.dx);
    let q = ky.factor(grid.dy);
    let c1 = (5.0 - b2) / (10.0 * (1.0 + b2));
    let c2 = 0.8 - 2.0 * c1;

    let delta2 = 0.8 * (1.0 + 8.0 * c1) * (kx.signed_square() + ky.signed_square());
    if !(delta2 > 0.0) {
        return Err(Error::FormulaDomain(format!(
            "delta^2 = {delta2} is not positive for kx = {kx}, ky = {ky}"
        )));
    }
    let delta_kk = delta2.sqrt();
    let k1 = if c1 >= 0.0 {
        delta_kk * (1.0 + 10.0 * c1) / (84.0 * c1 * c1 + 20.0 * c1 + 1.0).sqrt()
    } else {
        delta_kk
    };
    let rk2 = k1 * k1 - delta2;
    if rk2 < -1e-12 * delta2 {
        return Err(Error::FormulaDomain(format!("k1^2 - delta^2 = {rk2} < 0")));
    }
    let r_k = rk2.max(0.0).sqrt();

    let delta_prime = (1.0 + 20.0 * c1 * c2) * q * q + 4.0 * c1 * c1 * p * p * q * q + 100.0 * c1 * c1;
    let sq = delta_prime.sqrt();
    let sign = if c1 >= 0.0 { 1.0 } else { -1.0 };
    let a = 0.5 - c1.abs() * p * q / sq;
    let b = 0.25 - c1 * c1 * p * p * q * q / delta_prime;
    let d = 0.5 * (b + sign * ((2.0 * c1 * p * p + 5.0 * c2) * b * q + c1 * p * p * q) / (p * sq));
    let k2 = -(k1 * k1 / (2.0 * a)) * (r_k * a * a + a * k1 + 2.0 * r_k * d) / (r_k + k1);
    if !k2.is_finite() || !d.is_finite() {
        return Err(Error::FormulaDomain(format!("k2 is not finite (p = {p}, A = {a})")));
    }

    Ok(HocConstants {
        h,
        c1,
        c2,
        p,
        q,
        delta_kk,
        delta_prime,
        k1,
        k2,
        a,
        b,
        d,
        r_k,
        beta_m: a * k1,
        gamma_m: a * k2 + d * k1 * k1,
    })
}

pub fn omega_point_hoc(kx: WavenumberMode, ky: WavenumberMode, grid: &GridSpec) -> Result<OmegaPrediction> {
    hoc_constants(kx, ky, grid)?.prediction()
}
