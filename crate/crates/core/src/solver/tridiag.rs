//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// Pivots below this magnitude are treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-300;

/// Solves `A x = rhs` where row `i` of `A` is
/// `lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1]`.
///
/// All four slices have length `n`; `lower[0]` and `upper[n-1]` are ignored.
pub fn tridiagonal_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::InvalidConfig(format!(
            "tridiagonal bands must share a non-zero length (lower {}, diag {n}, upper {}, rhs {})",
            lower.len(),
            upper.len(),
            rhs.len()
        )));
    }
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; n];
    thomas_in_place(lower, diag, upper, &mut x, &mut scratch)?;
    Ok(x)
}

/// In-place variant: `rhs` is overwritten with the solution, `scratch` holds
/// the modified upper band. No allocation.
pub(crate) fn thomas_in_place(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = rhs.len();
    let mut pivot = diag[0];
    if !(pivot.abs() >= PIVOT_THRESHOLD) {
        return Err(Error::SingularSystem { row: 0, pivot });
    }
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if !(pivot.abs() >= PIVOT_THRESHOLD) {
            return Err(Error::SingularSystem { row: i, pivot });
        }
        scratch[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
                .unwrap();
            a.swap(col, p);
            b.swap(col, p);
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    fn densify(lower: &[f64], diag: &[f64], upper: &[f64]) -> Vec<Vec<f64>> {
        let n = diag.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = diag[i];
            if i > 0 {
                a[i][i - 1] = lower[i];
            }
            if i + 1 < n {
                a[i][i + 1] = upper[i];
            }
        }
        a
    }

    #[test]
    fn identity() {
        let r = [1.5, -2.0, 3.25, 0.0];
        let x = tridiagonal_solve(&[0.0; 4], &[1.0; 4], &[0.0; 4], &r).unwrap();
        assert_eq!(x, r);
    }

    #[test]
    fn hand_solved() {
        let x = tridiagonal_solve(&[0.0, -1.0, -1.0], &[2.0; 3], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0])
            .unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_unknown() {
        assert_eq!(tridiagonal_solve(&[9.0], &[4.0], &[9.0], &[2.0]).unwrap(), vec![0.5]);
    }

    #[test]
    fn singular_pivot() {
        let err = tridiagonal_solve(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { row: 1, .. }));
        assert!(tridiagonal_solve(&[0.0], &[0.0], &[0.0], &[1.0]).is_err());
        assert!(tridiagonal_solve(&[0.0], &[f64::NAN], &[0.0], &[1.0]).is_err());
        assert!(tridiagonal_solve(&[], &[], &[], &[]).is_err());
        assert!(tridiagonal_solve(&[0.0; 2], &[1.0; 3], &[0.0; 3], &[1.0; 3]).is_err());
    }

    #[test]
    fn seeded_dominant_n8() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(8);
        let n = 8;
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(2.5..4.0)).collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = tridiagonal_solve(&lower, &diag, &upper, &rhs).unwrap();
        let y = dense_solve(densify(&lower, &diag, &upper), rhs);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn matches_dense_elimination(
            n in 1usize..=32,
            seed in any::<u64>(),
        ) {
            use rand::{rngs::StdRng, Rng, SeedableRng};
            let mut rng = StdRng::seed_from_u64(seed);
            let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let diag: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(2.1..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let x = tridiagonal_solve(&lower, &diag, &upper, &rhs).unwrap();
            let y = dense_solve(densify(&lower, &diag, &upper), rhs);
            let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }
}
