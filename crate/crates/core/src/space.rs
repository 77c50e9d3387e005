//! Discretized one-dimensional metric-measure spaces.
//!
//! Every space carries its nodes, the quadrature weights of the reference
//! probability measure μ = e^{-V} dx restricted to the grid, the sampled
//! potential, and the declared curvature data used by the checkers.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gaussian_half_width_for_tail, normal_pdf, normal_sf};

/// Largest Gaussian mass the truncated line may discard.
pub const MAX_TAIL_MASS: f64 = 1e-12;
pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

pub type SpaceRef = Arc<Space1D>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Circle,
    GaussLine,
    WeightedLine,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Circle => "circle",
            SpaceKind::GaussLine => "gauss_line",
            SpaceKind::WeightedLine => "weighted_line",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Space1D {
    kind: SpaceKind,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
    potential: Vec<f64>,
    curvature_lower: f64,
    dimension_param: f64,
    truncation: Option<f64>,
    spacing: f64,
}

impl Space1D {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Declared lower bound K_lo with V'' ≥ K_lo on the grid's domain.
    pub fn curvature_lower(&self) -> f64 {
        self.curvature_lower
    }

    /// Dimension parameter N of the declared CD(K_lo, N) condition.
    pub fn dimension_param(&self) -> f64 {
        self.dimension_param
    }

    pub fn truncation(&self) -> Option<f64> {
        self.truncation
    }

    /// Uniform node spacing (radians on the circle).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn is_circle(&self) -> bool {
        self.kind == SpaceKind::Circle
    }

    /// Geodesic distance between nodes `i` and `j`.
    pub fn metric(&self, i: usize, j: usize) -> f64 {
        self.distance(self.nodes[i], self.nodes[j])
    }

    /// Distance between two coordinates of this space.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let d = libm::fabs(x - y);
        if self.is_circle() {
            let d = libm::fmod(d, 2.0 * PI);
            d.min(2.0 * PI - d)
        } else {
            d
        }
    }

    /// μ(g) as a grid sum.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.quad_weights).map(|(v, w)| v * w).sum()
    }

    /// Same grid and measure, different declared dimension parameter.
    pub fn with_dimension(&self, n_dim: f64) -> Result<SpaceRef> {
        if n_dim.is_nan() || n_dim < 1.0 {
            return Err(Error::OutOfRange { name: "N", value: n_dim, expected: "[1, inf]" });
        }
        let mut space = self.clone();
        space.dimension_param = n_dim;
        Ok(Arc::new(space))
    }

    /// Same space with a different declared curvature bound.
    pub fn with_curvature_lower(&self, k_lo: f64) -> SpaceRef {
        let mut space = self.clone();
        space.curvature_lower = k_lo;
        Arc::new(space)
    }
}

/// Uniform circle with `n` nodes θ_i = 2πi/n and the normalized arc-length measure.
pub fn build_circle(n: usize) -> Result<SpaceRef> {
    if n < 8 {
        return Err(Error::TooFewNodes { required: 8, got: n });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddNodeCount(n));
    }
    let h = 2.0 * PI / n as f64;
    Ok(Arc::new(Space1D {
        kind: SpaceKind::Circle,
        nodes: (0..n).map(|i| i as f64 * h).collect(),
        quad_weights: alloc::vec![1.0 / n as f64; n],
        potential: alloc::vec![0.0; n],
        curvature_lower: 0.0,
        dimension_param: 1.0,
        truncation: None,
        spacing: h,
    }))
}

fn line_nodes(n: usize, half_width: f64) -> (Vec<f64>, f64) {
    let h = 2.0 * half_width / (n - 1) as f64;
    let nodes = (0..n).map(|i| -half_width + i as f64 * h).collect();
    (nodes, h)
}

fn normalize_weights(mut weights: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::NotNormalizable(total));
    }
    for w in &mut weights {
        *w /= total;
    }
    if let Some(index) = weights.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::NonPositiveWeight { index });
    }
    Ok(weights)
}

/// Standard Gaussian measure on [-L, L]: trapezoid weights times the normal
/// density, renormalized to total mass one.
pub fn build_gauss_line(n: usize, half_width: f64) -> Result<SpaceRef> {
    if n < 16 {
        return Err(Error::TooFewNodes { required: 16, got: n });
    }
    let tail = 2.0 * normal_sf(half_width);
    if !(tail < MAX_TAIL_MASS) || half_width < 8.0 {
        return Err(Error::TailMassTooLarge {
            half_width,
            tail,
            required_half_width: gaussian_half_width_for_tail(MAX_TAIL_MASS).max(8.0),
        });
    }
    let (nodes, h) = line_nodes(n, half_width);
    let weights = nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let trap = if i == 0 || i == n - 1 { 0.5 * h } else { h };
            trap * normal_pdf(x)
        })
        .collect();
    let potential = nodes.iter().map(|&x| 0.5 * x * x).collect();
    Ok(Arc::new(Space1D {
        kind: SpaceKind::GaussLine,
        nodes,
        quad_weights: normalize_weights(weights)?,
        potential,
        curvature_lower: 1.0,
        dimension_param: f64::INFINITY,
        truncation: Some(half_width),
        spacing: h,
    }))
}

/// Line [-L, L] with μ ∝ e^{-V} sampled on the grid.
///
/// `curvature_lower` is the caller's bound on V''; it is recorded, not verified.
pub fn build_weighted_line<V>(
    n: usize,
    half_width: f64,
    potential: V,
    curvature_lower: f64,
) -> Result<SpaceRef>
where
    V: Fn(f64) -> f64,
{
    if n < 3 {
        return Err(Error::TooFewNodes { required: 3, got: n });
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::OutOfRange {
            name: "half_width",
            value: half_width,
            expected: "a positive finite number",
        });
    }
    let (nodes, h) = line_nodes(n, half_width);
    let samples: Vec<f64> = nodes.iter().map(|&x| potential(x)).collect();
    if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "potential", index });
    }
    let v_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let weights = samples.iter().map(|&v| libm::exp(-(v - v_min))).collect();
    Ok(Arc::new(Space1D {
        kind: SpaceKind::WeightedLine,
        nodes,
        quad_weights: normalize_weights(weights)?,
        potential: samples,
        curvature_lower,
        dimension_param: f64::INFINITY,
        truncation: Some(half_width),
        spacing: h,
    }))
}

/// Potentials used by the bundled test spaces.
pub mod potentials {
    /// V(x) = x²/2, V'' = 1.
    pub fn quadratic(x: f64) -> f64 {
        0.5 * x * x
    }

    /// V(x) = x⁴/4 − x²/2, V'' = 3x² − 1 ≥ −1.
    pub fn double_well(x: f64) -> f64 {
        let x2 = x * x;
        0.25 * x2 * x2 - 0.5 * x2
    }

    pub const DOUBLE_WELL_CURVATURE_LOWER: f64 = -1.0;

    pub fn flat(_x: f64) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_basics() {
        let s = build_circle(8).unwrap();
        assert!(s.quad_weights().iter().all(|&w| w == 0.125));
        assert!((s.quad_weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((s.metric(0, 4) - PI).abs() < 1e-15);
        assert!((s.metric(1, 7) - PI / 2.0).abs() < 1e-15);
        assert_eq!(s.dimension_param(), 1.0);
        assert_eq!(s.curvature_lower(), 0.0);
        assert!(s.truncation().is_none());
    }

    #[test]
    fn circle_rejects_bad_sizes() {
        assert_eq!(build_circle(6).unwrap_err(), Error::TooFewNodes { required: 8, got: 6 });
        assert_eq!(build_circle(9).unwrap_err(), Error::OddNodeCount(9));
    }

    #[test]
    fn circle_first_moment_vanishes() {
        let s = build_circle(512).unwrap();
        let c: alloc::vec::Vec<f64> = s.nodes().iter().map(|&t| libm::cos(t)).collect();
        assert!(s.integrate(&c).abs() < 1e-12);
    }

    #[test]
    fn gauss_line_moments() {
        let s = build_gauss_line(2048, 10.0).unwrap();
        assert!((s.quad_weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let x: alloc::vec::Vec<f64> = s.nodes().to_vec();
        assert!(s.integrate(&x).abs() < 1e-12);
        let x2: alloc::vec::Vec<f64> = x.iter().map(|v| v * v).collect();
        assert!((s.integrate(&x2) - 1.0).abs() < 1e-6);
        assert_eq!(s.curvature_lower(), 1.0);
    }

    #[test]
    fn gauss_line_rejects_short_truncation() {
        match build_gauss_line(256, 6.0).unwrap_err() {
            Error::TailMassTooLarge { required_half_width, .. } => {
                assert!(required_half_width >= 8.0)
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(build_gauss_line(8, 10.0).is_err());
    }

    #[test]
    fn weighted_line_reproduces_gauss_weights() {
        let g = build_gauss_line(512, 10.0).unwrap();
        let w = build_weighted_line(512, 10.0, potentials::quadratic, 1.0).unwrap();
        for (a, b) in g.quad_weights().iter().zip(w.quad_weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_line_flat_and_double_well() {
        let flat = build_weighted_line(33, 1.0, potentials::flat, 0.0).unwrap();
        let w0 = flat.quad_weights()[0];
        assert!(flat.quad_weights().iter().all(|&w| (w - w0).abs() < 1e-15));

        let dw = build_weighted_line(101, 3.0, potentials::double_well, -1.0).unwrap();
        let w = dw.quad_weights();
        for i in 0..w.len() {
            assert!((w[i] - w[w.len() - 1 - i]).abs() < 1e-15);
        }
        // bimodal: the origin is a local minimum of the weights
        assert!(w[50] < w[40] && w[50] < w[60]);
        assert_eq!(dw.curvature_lower(), -1.0);
    }

    #[test]
    fn weighted_line_rejects_non_finite_potential() {
        let err = build_weighted_line(16, 1.0, |x| if x > 0.5 { f64::NAN } else { 0.0 }, 0.0)
            .unwrap_err();
        assert!(matches!(err, Error::NonFinite { what: "potential", .. }));
    }

    #[test]
    fn metric_axioms_exhaustive() {
        for s in [build_circle(64).unwrap(), build_weighted_line(64, 2.0, potentials::flat, 0.0).unwrap()] {
            let n = s.len();
            for i in 0..n {
                assert_eq!(s.metric(i, i), 0.0);
                for j in 0..n {
                    assert_eq!(s.metric(i, j), s.metric(j, i));
                    if i != j {
                        assert!(s.metric(i, j) > 0.0);
                    }
                    for k in 0..n {
                        assert!(s.metric(i, k) <= s.metric(i, j) + s.metric(j, k) + 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_override() {
        let s = build_circle(16).unwrap();
        assert_eq!(s.with_dimension(3.0).unwrap().dimension_param(), 3.0);
        assert!(s.with_dimension(0.5).is_err());
    }
}
