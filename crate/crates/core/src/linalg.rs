//! Symmetric tridiagonal eigensolvers, a small dense matrix and the FFT.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: alloc::vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Solves `a x = b` for symmetric positive definite `a` by Cholesky factorization.
pub fn cholesky_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::Invalid(alloc::format!("right-hand side must have {n} entries")));
    }
    let mut l = alloc::vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::Invalid("matrix is not positive definite".into()));
        }
        let d = libm::sqrt(d);
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut v = a.get(i, j);
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    Ok(y)
}

/// Eigenpairs of a symmetric tridiagonal matrix, eigenvalues ascending.
/// `vectors` holds eigenvector k in row k (row-major n×n, orthonormal).
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl TridiagonalEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.values.len();
        &self.vectors[k * n..(k + 1) * n]
    }
}

fn check_tridiagonal(diag: &[f64], off: &[f64]) -> Result<()> {
    if diag.is_empty() || off.len() + 1 != diag.len() {
        return Err(Error::Invalid("tridiagonal input needs n diagonal and n-1 off-diagonal entries".into()));
    }
    if let Some(index) = diag.iter().chain(off).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "tridiagonal entry", index });
    }
    Ok(())
}

/// Implicit-shift QL on (d, e). When `z` is given its rows are rotated along,
/// so starting from the identity they end up as the eigenvectors.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(libm::fabs(d[l]) + libm::fabs(e[l]));
        let mut m = l;
        while m < n - 1 && libm::fabs(e[m]) > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence { solver: "tridiagonal QL", iterations: sweeps, violation: libm::fabs(e[l]) });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for k in 0..n {
                            let h = zi1[k];
                            zi1[k] = s * zi[k] + c * h;
                            zi[k] = c * zi[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if libm::fabs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    check_tridiagonal(diag, off)?;
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    check_tridiagonal(diag, off)?;
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = alloc::vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&z[k * n..(k + 1) * n]);
    }
    Ok(TridiagonalEigen { values, vectors })
}

/// In-place discrete Fourier transform, X_k = Σ x_j e^{∓2πijk/n}
/// (minus sign forward). The inverse is not scaled by 1/n.
pub fn fft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    if !n.is_power_of_two() {
        let out: Vec<Complex64> = (0..n)
            .map(|k| {
                buf.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        let ang = sign * 2.0 * core::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                        x * Complex64::new(libm::cos(ang), libm::sin(ang))
                    })
                    .sum()
            })
            .collect();
        buf.copy_from_slice(&out);
        return;
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * core::f64::consts::PI / len as f64;
        let half = len / 2;
        // twiddles computed directly rather than by recurrence to keep the error flat
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::new(libm::cos(ang * k as f64), libm::sin(ang * k as f64)))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = buf[start + k];
                let b = buf[start + k + half] * twiddles[k];
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_on_a_laplacian_plus_identity() {
        let n = 6;
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            a.set(i, i, 3.0);
            if i + 1 < n {
                a.set(i, i + 1, -1.0);
                a.set(i + 1, i, -1.0);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let sol = cholesky_solve(&a, &a.mul_vec(&x)).unwrap();
        for (u, v) in sol.iter().zip(&x) {
            assert!((u - v).abs() < 1e-13);
        }
        a.set(0, 0, -1.0);
        assert!(cholesky_solve(&a, &x).is_err());
    }

    fn dense(diag: &[f64], off: &[f64]) -> DenseMatrix {
        let n = diag.len();
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, diag[i]);
            if i + 1 < n {
                m.set(i, i + 1, off[i]);
                m.set(i + 1, i, off[i]);
            }
        }
        m
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // tridiag(1, -2, 1) has eigenvalues -2 + 2cos(kπ/(n+1))
        let n = 50;
        let vals = tridiagonal_eigenvalues(&alloc::vec![-2.0; n], &alloc::vec![1.0; n - 1]).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| -2.0 + 2.0 * libm::cos(k as f64 * core::f64::consts::PI / (n + 1) as f64))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        let diag = [4.0, -1.0, 2.5, 0.0, 3.0, 1.0, -2.0];
        let off = [1.0, 0.5, -2.0, 0.1, 1e-3, 3.0];
        let m = dense(&diag, &off);
        let eig = tridiagonal_eigen(&diag, &off).unwrap();
        let n = diag.len();
        for k in 0..n {
            let v = eig.vector(k);
            let mv = m.mul_vec(v);
            for i in 0..n {
                assert!((mv[i] - eig.values[k] * v[i]).abs() < 1e-12);
            }
            for l in 0..n {
                let dot: f64 = v.iter().zip(eig.vector(l)).map(|(a, b)| a * b).sum();
                assert!((dot - if k == l { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let vals = tridiagonal_eigenvalues(&diag, &off).unwrap();
        for (a, b) in vals.iter().zip(&eig.values) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn one_by_one_and_bad_shapes() {
        assert_eq!(tridiagonal_eigenvalues(&[3.0], &[]).unwrap(), alloc::vec![3.0]);
        assert!(tridiagonal_eigenvalues(&[1.0, 2.0], &[]).is_err());
        assert!(tridiagonal_eigenvalues(&[1.0, f64::NAN], &[0.0]).is_err());
    }

    fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let a = sign * 2.0 * core::f64::consts::PI * (j * k) as f64 / n as f64;
                        v * Complex64::new(a.cos(), a.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn fft_matches_naive_transform() {
        for n in [8usize, 12, 64, 30] {
            let x: Vec<Complex64> =
                (0..n).map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos())).collect();
            let mut y = x.clone();
            fft(&mut y, false);
            for (a, b) in y.iter().zip(naive_dft(&x, -1.0)) {
                assert!((a - b).norm() < 1e-11);
            }
            fft(&mut y, true);
            for (a, b) in y.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-13);
            }
        }
    }
}
