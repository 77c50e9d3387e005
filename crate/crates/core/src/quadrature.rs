//! Gauss–Hermite rules for the standard normal weight.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;

/// Nodes y_k and weights w_k with Σ w_k g(y_k) ≈ E g(Z), Z ~ N(0,1).
/// Exact for polynomials of degree < 2·order.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub–Welsch: the Jacobi matrix of the probabilists' Hermite
    /// polynomials has zero diagonal and off-diagonal √k.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > 400 {
            return Err(Error::OutOfRange { name: "quadrature order", value: order as f64, expected: "[1, 400]" });
        }
        let off: Vec<f64> = (1..order).map(|k| libm::sqrt(k as f64)).collect();
        let eig = tridiagonal_eigen(&alloc::vec![0.0; order], &off)?;
        let mut nodes = eig.values.clone();
        let mut weights: Vec<f64> = (0..order).map(|k| eig.vector(k)[0] * eig.vector(k)[0]).collect();
        // the rule is symmetric; enforce it exactly
        for k in 0..order / 2 {
            let j = order - 1 - k;
            let y = 0.5 * (nodes[j] - nodes[k]);
            nodes[k] = -y;
            nodes[j] = y;
            let w = 0.5 * (weights[k] + weights[j]);
            weights[k] = w;
            weights[j] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(GaussHermite { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(y, w)| w * g(*y)).sum()
    }
}
