//! Heat and Ornstein–Uhlenbeck semigroups on the model spaces.
//!
//! Three engines: Mehler averaging by Gauss–Hermite quadrature on the
//! Gaussian line, Fourier multipliers on the circle, and the eigenexpansion of
//! the discretized generator on any line.

use alloc::sync::Arc;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{fft, tridiagonal_eigen, tridiagonal_eigenvalues, DenseMatrix, TridiagonalEigen};
use crate::quadrature::GaussHermite;
use crate::space::{Space1D, SpaceKind, SpaceRef};

pub const DEFAULT_QUAD_ORDER: usize = 64;
pub const MIN_QUAD_ORDER: usize = 32;
/// Largest grid for the dense eigendecomposition.
pub const MAX_SPECTRAL_NODES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Mehler,
    CircleFourier,
    MatrixExp,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Mehler => "mehler",
            Engine::CircleFourier => "circle_fourier",
            Engine::MatrixExp => "matrix_exp",
        }
    }
}

/// Generator −L = W^{-1/2} S W^{1/2} in symmetrized form, with its eigenpairs.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eig: TridiagonalEigen,
    sqrt_w: Vec<f64>,
}

impl Spectrum {
    /// Eigenvalues of L, ascending; the last one is 0.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn gap(&self) -> f64 {
        let v = &self.eig.values;
        -v[v.len() - 2]
    }
}

#[derive(Debug, Clone)]
enum Data {
    Mehler(GaussHermite),
    Fourier,
    Spectral(Spectrum),
}

/// P_t (or T_t) on one space, with whatever it needs cached.
#[derive(Debug, Clone)]
pub struct SemigroupOperator {
    space: SpaceRef,
    data: Data,
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange { name: "t", value: t, expected: "> 0" });
    }
    Ok(())
}

fn check_values(f: &[f64], space: &Space1D) -> Result<()> {
    if f.len() != space.len() {
        return Err(Error::Invalid(alloc::format!("expected {} values, got {}", space.len(), f.len())));
    }
    if let Some(index) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "semigroup input", index });
    }
    Ok(())
}

/// P_t obeys the maximum principle; trimming to the input range only removes
/// roundoff and interpolation overshoot.
fn clamp_to_range(out: &mut [f64], f: &[f64]) {
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.iter_mut().for_each(|v| *v = v.clamp(lo, hi));
}

impl SemigroupOperator {
    /// Mehler formula on the Gaussian line.
    pub fn mehler(space: &SpaceRef, quad_order: usize) -> Result<Self> {
        if space.kind() != SpaceKind::GaussLine {
            return Err(Error::WrongSpaceKind { expected: "gauss_line" });
        }
        if quad_order < MIN_QUAD_ORDER {
            return Err(Error::OutOfRange {
                name: "quad_order",
                value: quad_order as f64,
                expected: ">= 32",
            });
        }
        Ok(SemigroupOperator { space: Arc::clone(space), data: Data::Mehler(GaussHermite::new(quad_order)?) })
    }

    pub fn circle(space: &SpaceRef) -> Result<Self> {
        if !space.is_circle() {
            return Err(Error::WrongSpaceKind { expected: "circle" });
        }
        Ok(SemigroupOperator { space: Arc::clone(space), data: Data::Fourier })
    }

    /// Eigendecomposition of the discretized generator of a line.
    pub fn matrix_exp(space: &SpaceRef) -> Result<Self> {
        if space.len() > MAX_SPECTRAL_NODES {
            return Err(Error::ProblemTooLarge { n: space.len(), max: MAX_SPECTRAL_NODES });
        }
        let (diag, off) = symmetrized_generator(space)?;
        let eig = tridiagonal_eigen(&diag, &off)?;
        let sqrt_w = space.quad_weights().iter().map(|w| libm::sqrt(*w)).collect();
        Ok(SemigroupOperator { space: Arc::clone(space), data: Data::Spectral(Spectrum { eig, sqrt_w }) })
    }

    /// Fourier on the circle, Mehler on the Gaussian line, eigenexpansion otherwise.
    pub fn for_space(space: &SpaceRef) -> Result<Self> {
        match space.kind() {
            SpaceKind::Circle => Self::circle(space),
            SpaceKind::GaussLine => Self::mehler(space, DEFAULT_QUAD_ORDER),
            SpaceKind::WeightedLine => Self::matrix_exp(space),
        }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn engine(&self) -> Engine {
        match self.data {
            Data::Mehler(_) => Engine::Mehler,
            Data::Fourier => Engine::CircleFourier,
            Data::Spectral(_) => Engine::MatrixExp,
        }
    }

    pub fn spectrum(&self) -> Option<&Spectrum> {
        match &self.data {
            Data::Spectral(s) => Some(s),
            _ => None,
        }
    }

    /// Smallest nonzero eigenvalue of −L: exactly 1 for the circle multipliers
    /// and the Mehler formula, computed for the discretized generator.
    pub fn spectral_gap(&self) -> f64 {
        match &self.data {
            Data::Spectral(s) => s.gap(),
            _ => 1.0,
        }
    }

    pub fn apply(&self, f: &[f64], t: f64) -> Result<Vec<f64>> {
        check_time(t)?;
        check_values(f, &self.space)?;
        Ok(match &self.data {
            Data::Mehler(gh) => mehler_average(f, &self.space, t, gh),
            Data::Fourier => fourier_heat(f, t),
            Data::Spectral(s) => spectral_apply(f, t, s),
        })
    }
}

/// Cubic Lagrange interpolation of grid values at x, constant beyond the ends.
fn interpolate(f: &[f64], x0: f64, h: f64, x: f64) -> f64 {
    let n = f.len();
    let s = (x - x0) / h;
    if s <= 0.0 {
        return f[0];
    }
    if s >= (n - 1) as f64 {
        return f[n - 1];
    }
    let j = (s as usize).min(n - 2);
    let start = j.saturating_sub(1).min(n - 4);
    let u = s - start as f64;
    let (y0, y1, y2, y3) = (f[start], f[start + 1], f[start + 2], f[start + 3]);
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3
}

fn mehler_average(f: &[f64], space: &Space1D, t: f64, gh: &GaussHermite) -> Vec<f64> {
    let decay = libm::exp(-t);
    let spread = libm::sqrt(-libm::expm1(-2.0 * t));
    let x0 = space.nodes()[0];
    let h = space.spacing();
    let mut out: Vec<f64> = space
        .nodes()
        .iter()
        .map(|&x| {
            gh.nodes
                .iter()
                .zip(&gh.weights)
                .map(|(y, w)| w * interpolate(f, x0, h, decay * x + spread * y))
                .sum()
        })
        .collect();
    clamp_to_range(&mut out, f);
    out
}

fn fourier_heat(f: &[f64], t: f64) -> Vec<f64> {
    let n = f.len();
    let mut buf: Vec<Complex64> = f.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    fft(&mut buf, false);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        *c *= libm::exp(-k * k * t) / n as f64;
    }
    fft(&mut buf, true);
    buf.iter().map(|c| c.re).collect()
}

fn spectral_apply(f: &[f64], t: f64, s: &Spectrum) -> Vec<f64> {
    let n = f.len();
    let g: Vec<f64> = f.iter().zip(&s.sqrt_w).map(|(a, b)| a * b).collect();
    let mut acc = alloc::vec![0.0; n];
    for (k, &lambda) in s.eig.values.iter().enumerate() {
        let v = s.eig.vector(k);
        let coeff: f64 = v.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() * libm::exp(t * lambda);
        if coeff == 0.0 {
            continue;
        }
        acc.iter_mut().zip(v).for_each(|(a, x)| *a += coeff * x);
    }
    let mut out: Vec<f64> = acc.iter().zip(&s.sqrt_w).map(|(a, b)| a / b).collect();
    clamp_to_range(&mut out, f);
    out
}

/// Edge conductances c_{i,i+1} ∝ e^{-(V_i + V_{i+1})/2}/h, scaled so that
/// c ≈ w/h² in the bulk; returned as logarithms.
fn log_conductances(space: &Space1D) -> Result<Vec<f64>> {
    if space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "a line space" });
    }
    let n = space.len();
    let h = space.spacing();
    let v = space.potential();
    let w = space.quad_weights();
    let mid = n / 2;
    let log_scale = libm::log(w[mid]) + v[mid] - 2.0 * libm::log(h);
    Ok((0..n - 1).map(|i| log_scale - 0.5 * (v[i] + v[i + 1])).collect())
}

/// Diagonal and off-diagonal of W^{1/2} L W^{-1/2}, computed in log space so
/// that tail weights never under- or overflow.
fn symmetrized_generator(space: &Space1D) -> Result<(Vec<f64>, Vec<f64>)> {
    let log_c = log_conductances(space)?;
    let log_w: Vec<f64> = space.quad_weights().iter().map(|w| libm::log(*w)).collect();
    let n = space.len();
    let off: Vec<f64> = (0..n - 1).map(|i| libm::exp(log_c[i] - 0.5 * (log_w[i] + log_w[i + 1]))).collect();
    let diag = (0..n)
        .map(|i| {
            let left = if i > 0 { libm::exp(log_c[i - 1] - log_w[i]) } else { 0.0 };
            let right = if i + 1 < n { libm::exp(log_c[i] - log_w[i]) } else { 0.0 };
            -(left + right)
        })
        .collect();
    Ok((diag, off))
}

/// Discretization of L = d²/dx² − V'd/dx on a line with no-flux ends:
/// L_{i,i±1} = c_{i,i±1}/w_i, zero row sums, W·L symmetric.
pub fn generator_matrix(space: &Space1D) -> Result<DenseMatrix> {
    let log_c = log_conductances(space)?;
    let w = space.quad_weights();
    let n = space.len();
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n - 1 {
        let c = libm::exp(log_c[i]);
        m.set(i, i + 1, c / w[i]);
        m.set(i + 1, i, c / w[i + 1]);
    }
    for i in 0..n {
        let s: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j)).sum();
        m.set(i, i, -s);
    }
    Ok(m)
}

/// Eigenvalues of the discretized generator, ascending (the last is 0).
pub fn generator_eigenvalues(space: &Space1D) -> Result<Vec<f64>> {
    let (diag, off) = symmetrized_generator(space)?;
    tridiagonal_eigenvalues(&diag, &off)
}

/// T_t f by Gauss–Hermite quadrature of the Mehler average
/// E f(e^{-t}x + √(1 − e^{-2t}) Z); f is extended by its endpoint values.
pub fn ou_apply(f: &[f64], space: &SpaceRef, t: f64, quad_order: usize) -> Result<Vec<f64>> {
    SemigroupOperator::mehler(space, quad_order)?.apply(f, t)
}

/// Heat flow on the circle: mode k is damped by e^{-k²t}.
pub fn circle_heat_apply(f: &[f64], space: &SpaceRef, t: f64) -> Result<Vec<f64>> {
    SemigroupOperator::circle(space)?.apply(f, t)
}

/// e^{tL} f through the eigenexpansion. Builds the decomposition on every
/// call; keep a [`SemigroupOperator`] around to reuse it.
pub fn generic_apply(f: &[f64], t: f64, space: &SpaceRef) -> Result<Vec<f64>> {
    SemigroupOperator::matrix_exp(space)?.apply(f, t)
}

/// Times at which the uniform-ergodicity constant is probed.
pub const ERGODICITY_TIMES: [f64; 8] = [0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0];

fn ergodicity_test_set(space: &Space1D) -> Vec<Vec<f64>> {
    let n = space.len();
    let w = space.quad_weights();
    let mut set = Vec::new();
    let pairs: [(usize, usize); 3] = if space.is_circle() {
        [(0, n / 2), (n / 4, 3 * n / 4), (n / 8, n / 8 + 1)]
    } else {
        [(0, n - 1), (n / 4, n - 1 - n / 4), (n / 2 - 1, n / 2)]
    };
    // h = 1_i − (w_i/w_j) 1_j has μ(h) = 0 and ‖h‖_∞ = 1, so t = 0 gives exactly 1
    for (a, b) in pairs {
        let (i, j) = if w[a] <= w[b] { (a, b) } else { (b, a) };
        let mut h = alloc::vec![0.0; n];
        h[i] = 1.0;
        h[j] = -w[i] / w[j];
        set.push(h);
    }
    let x = space.nodes();
    if space.is_circle() {
        for k in 1..=2 {
            set.push(x.iter().map(|t| libm::cos(k as f64 * t)).collect());
        }
    } else {
        let half = space.truncation().unwrap_or(1.0);
        set.push(x.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect());
        set.push(x.iter().map(|v| v / half).collect());
        set.push(x.iter().map(|v| libm::tanh(*v)).collect());
    }
    set
}

/// (c, λ) with ‖P_t h − μ(h)‖_∞ ≤ c e^{-λt} ‖h‖_∞ over a fixed test set and
/// [`ERGODICITY_TIMES`]; λ is the spectral gap of the operator.
pub fn ergodicity_estimate(op: &SemigroupOperator) -> Result<(f64, f64)> {
    let lambda = op.spectral_gap();
    if !(libm::fabs(lambda) >= 1e-10) {
        return Err(Error::DegenerateGap(lambda));
    }
    let space = op.space();
    let mut c: f64 = 0.0;
    for h in ergodicity_test_set(space) {
        let norm = h.iter().fold(0.0, |m: f64, v| m.max(libm::fabs(*v)));
        let mean = space.integrate(&h);
        for &t in &ERGODICITY_TIMES {
            let pt = if t == 0.0 { h.clone() } else { op.apply(&h, t)? };
            let dev = pt.iter().fold(0.0, |m: f64, v| m.max(libm::fabs(v - mean)));
            c = c.max(dev * libm::exp(lambda * t) / norm);
        }
    }
    Ok((c, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_circle, build_gauss_line, build_weighted_line, potentials};

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let f: Vec<f64> = (0..10).map(|i| {
            let x = -1.0 + 0.25 * i as f64;
            x * x * x - 2.0 * x
        }).collect();
        for k in 0..40 {
            let x = -1.0 + 2.25 * k as f64 / 39.0;
            let v = interpolate(&f, -1.0, 0.25, x);
            assert!((v - (x * x * x - 2.0 * x)).abs() < 1e-12, "{x}");
        }
        assert_eq!(interpolate(&f, -1.0, 0.25, -3.0), f[0]);
        assert_eq!(interpolate(&f, -1.0, 0.25, 7.0), f[9]);
    }

    #[test]
    fn mehler_on_hermite_polynomials() {
        let g = build_gauss_line(2048, 10.0).unwrap();
        let x = g.nodes();
        let one = ou_apply(&alloc::vec![1.0; x.len()], &g, 0.3, 64).unwrap();
        assert!(one.iter().all(|&v| v == 1.0));
        for t in [0.05, 0.5, 2.0] {
            let he1 = ou_apply(x, &g, t, 64).unwrap();
            let f2: Vec<f64> = x.iter().map(|v| v * v - 1.0).collect();
            let he2 = ou_apply(&f2, &g, t, 64).unwrap();
            for i in 0..x.len() {
                if x[i].abs() <= 5.0 {
                    assert!((he1[i] - libm::exp(-t) * x[i]).abs() <= 1e-6 * x[i].abs().max(1e-3));
                    assert!((he2[i] - libm::exp(-2.0 * t) * f2[i]).abs() <= 1e-5);
                }
            }
        }
        assert!(ou_apply(x, &g, 0.0, 64).is_err());
        assert!(ou_apply(x, &g, 0.1, 16).is_err());
    }

    #[test]
    fn circle_modes_decay() {
        let c = build_circle(256).unwrap();
        for k in 0..=5u32 {
            let f: Vec<f64> = c.nodes().iter().map(|t| 1.0 + libm::cos(k as f64 * t)).collect();
            let out = circle_heat_apply(&f, &c, 0.3).unwrap();
            let decay = libm::exp(-((k * k) as f64) * 0.3);
            for (o, t) in out.iter().zip(c.nodes()) {
                assert!((o - 1.0 - decay * libm::cos(k as f64 * t)).abs() < 1e-12);
            }
        }
        let f: Vec<f64> = c.nodes().iter().map(|t| libm::exp(libm::sin(*t))).collect();
        let mean = c.integrate(&f);
        for v in circle_heat_apply(&f, &c, 50.0).unwrap() {
            assert!((v - mean).abs() < 1e-10);
        }
    }

    #[test]
    fn generator_structure() {
        let g = build_gauss_line(64, 8.0).unwrap();
        let m = generator_matrix(&g).unwrap();
        let w = g.quad_weights();
        let n = g.len();
        for i in 0..n {
            let row: f64 = m.row(i).iter().sum();
            assert!(row.abs() <= 1e-9 * m.get(i, i).abs());
            for j in 0..n {
                let a = w[i] * m.get(i, j);
                let b = w[j] * m.get(j, i);
                assert!((a - b).abs() <= 1e-8);
            }
        }
        let eig = generator_eigenvalues(&g).unwrap();
        assert!(eig[n - 1].abs() < 1e-9);
        assert!(eig[n - 2] < -0.5);
        assert!(eig.iter().all(|&v| v <= 1e-9));
        assert!(generator_matrix(&build_circle(8).unwrap()).is_err());
    }

    #[test]
    fn matrix_exp_conserves_and_preserves_order() {
        let dw = build_weighted_line(401, 3.0, potentials::double_well, -1.0).unwrap();
        let op = SemigroupOperator::matrix_exp(&dw).unwrap();
        let f: Vec<f64> = dw.nodes().iter().map(|x| libm::exp(-4.0 * (x - 1.0) * (x - 1.0))).collect();
        let mass = dw.integrate(&f);
        for t in [0.01, 0.3, 2.0, 20.0] {
            let out = op.apply(&f, t).unwrap();
            assert!((dw.integrate(&out) - mass).abs() < 1e-10);
            assert!(out.iter().all(|&v| v >= -1e-12));
        }
        let one = op.apply(&alloc::vec![1.0; dw.len()], 1.0).unwrap();
        assert!(one.iter().all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn ergodicity_on_the_circle() {
        let c = build_circle(512).unwrap();
        let (k, lambda) = ergodicity_estimate(&SemigroupOperator::circle(&c).unwrap()).unwrap();
        assert!((lambda - 1.0).abs() < 1e-3);
        assert!(k >= 1.0);
    }
}
