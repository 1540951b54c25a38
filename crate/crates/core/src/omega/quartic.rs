//! Quartic in `a = sqrt(lambda)` for HOC point SOR.
//!
//! `a^4 + a3 a^3 + a2 a^2 + a1 a + a0 = 0` relates an SOR eigenvalue
//! `lambda = a^2` to the mode factors `p = C(kx)`, `q = C(ky)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::eigen::{eigenvalues, DenseMatrix};

/// `[a3, a2, a1, a0]` of the monic quartic.
pub fn quartic_coefficients(omega: f64, p: f64, q: f64, c1: f64, c2: f64) -> [f64; 4] {
    let w = omega;
    let a3 = -0.4 * q * w * (c1 * p * p * w + 5.0 * c2);
    let a2 = 2.0 * (w - 1.0) + (c2 * c2 * q * q - 4.0 * c1 * c1 * p * p - p * p * q * q / 25.0) * w * w;
    let a1 = -0.4 * q * w * (c1 * p * p * w + 5.0 * c2 * (w - 1.0));
    let a0 = (w - 1.0) * (w - 1.0);
    [a3, a2, a1, a0]
}

/// Roots of the quartic as eigenvalues of its companion matrix.
pub fn quartic_roots(omega: f64, p: f64, q: f64, c1: f64, c2: f64) -> Result<[Complex64; 4]> {
    let coef = quartic_coefficients(omega, p, q, c1, c2);
    let mut m = DenseMatrix::zeros(4);
    for (j, c) in coef.iter().enumerate() {
        m[(0, j)] = -c;
    }
    for i in 1..4 {
        m[(i, i - 1)] = 1.0;
    }
    let e = eigenvalues(&m)?;
    e.try_into().map_err(|_| Error::EigenFailure(4))
}

/// `|a|^2` for each root, largest first: the moduli of the SOR eigenvalues
/// carried by the mode.
pub fn quartic_moduli(omega: f64, p: f64, q: f64, c1: f64, c2: f64) -> Result<[f64; 4]> {
    let roots = quartic_roots(omega, p, q, c1, c2)?;
    let mut m = roots.map(|z| z.norm_sqr());
    m.sort_by(|a, b| b.total_cmp(a));
    Ok(m)
}
