//! Eigenvalues of dense real matrices: balancing, Hessenberg reduction by
//! stabilized elementary similarity transforms, and Francis double-shift QR.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidConfig("matrix rows must form a square".into()));
        }
        Ok(Self { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// All eigenvalues of `m`, in no particular order.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let mut a = m.clone();
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure(0));
    }
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a)
}

fn balance(a: &mut DenseMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn hessenberg(a: &mut DenseMatrix) {
    let n = a.n;
    for m in 1..n.saturating_sub(1) {
        let mut x: f64 = 0.0;
        let mut piv = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                piv = j;
            }
        }
        if piv != m {
            for j in m - 1..n {
                a.data.swap(piv * n + j, m * n + j);
            }
            for j in 0..n {
                a.data.swap(j * n + piv, j * n + m);
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..n {
                        a[(i, j)] -= y * a[(m, j)];
                    }
                    for j in 0..n {
                        a[(j, m)] += y * a[(j, i)];
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[(i, j)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

fn hqr(a: &mut DenseMatrix) -> Result<Vec<Complex64>> {
    let n = a.n;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(w);
    }
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let (mut x, mut y, mut z);
    let mut t = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[(nu, nu)];
            if l == nu {
                w[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            y = a[(nu - 1, nu - 1)];
            let mut ww = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + ww;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    w[nu - 1] = Complex64::new(x + z, 0.0);
                    w[nu] = w[nu - 1];
                    if z != 0.0 {
                        w[nu] = Complex64::new(x - ww / z, 0.0);
                    }
                } else {
                    w[nu] = Complex64::new(x + p, -z);
                    w[nu - 1] = w[nu].conj();
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::EigenFailure(nu));
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r);
            let mut m = nu - 2;
            loop {
                z = a[(m, m)];
                r = x - z;
                let s = y - z;
                p = (r * s - ww) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a[(i + 2, i)] = 0.0;
                if i != m {
                    a[(i + 2, i - 1)] = 0.0;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = 0.0;
                    if k + 1 != nu {
                        r = a[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        p = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nu {
                            p += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= p * z;
                        }
                        a[(k + 1, j)] -= p * y;
                        a[(k, j)] -= p * x;
                    }
                    let mmin = nu.min(k + 3);
                    for i in l..=mmin {
                        p = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nu {
                            p += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= p * r;
                        }
                        a[(i, k + 1)] -= p * q;
                        a[(i, k)] -= p;
                    }
                }
                k += 1;
            }
        }
    }
    if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::EigenFailure(n));
    }
    Ok(w)
}
