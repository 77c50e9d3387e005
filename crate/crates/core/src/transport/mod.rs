//! Kantorovich–Wasserstein distances between discrete measures on a [`Space1D`].
//!
//! The exact solvers are the 1D cumulative/quantile formulas and the circle
//! shift minimization; the dense transport LP is the ground-truth oracle for
//! small grids and Sinkhorn is an independent entropic cross-check.

mod circle;
mod duality;
mod line;
mod lp;
mod sinkhorn;

use alloc::vec::Vec;

pub use circle::wp_circle;
pub use duality::{duality_gap_check, hopf_lax, kantorovich_norm};
pub use line::{w1_line, wp_quantile_line};
pub use lp::{solve_transport, wp_lp_oracle, TransportSolution, MAX_LP_NODES};
pub use sinkhorn::{default_schedule, wp_sinkhorn, MAX_SINKHORN_NODES};

use crate::error::{Error, Result};
use crate::measure::Density;
use crate::space::Space1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CdfLine,
    QuantileLine,
    /// Monotone coupling of the lifted measures, minimized over the mass shift.
    CircleShift,
    LpOracle,
    Sinkhorn,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CdfLine => "cdf_line",
            Method::QuantileLine => "quantile_line",
            Method::CircleShift => "circle_shift",
            Method::LpOracle => "lp_oracle",
            Method::Sinkhorn => "sinkhorn",
        }
    }
}

/// Sparse coupling: `(source node, target node, mass)` triples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Plan {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Plan {
    pub fn row_sums(&self) -> Vec<f64> {
        let mut rows = alloc::vec![0.0; self.n];
        for &(i, _, m) in &self.entries {
            rows[i] += m;
        }
        rows
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut cols = alloc::vec![0.0; self.n];
        for &(_, j, m) in &self.entries {
            cols[j] += m;
        }
        cols
    }

    /// Σ mass·d(i, j)^p on `space`.
    pub fn cost(&self, space: &Space1D, p: f64) -> f64 {
        self.entries.iter().map(|&(i, j, m)| m * pow_p(space.metric(i, j), p)).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub iterations: usize,
    /// ℓ¹ marginal violation of the returned plan before any rounding.
    pub marginal_violation: f64,
    pub duality_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    pub value: f64,
    pub p: f64,
    pub method: Method,
    pub plan: Option<Plan>,
    pub diagnostics: Diagnostics,
}

impl TransportResult {
    fn exact(value: f64, p: f64, method: Method, plan: Option<Plan>) -> Self {
        TransportResult { value, p, method, plan, diagnostics: Diagnostics::default() }
    }

    /// W_p^p.
    pub fn cost(&self) -> f64 {
        pow_p(self.value, self.p)
    }
}

pub(crate) fn pow_p(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        libm::pow(d, p)
    }
}

pub(crate) fn root_p(c: f64, p: f64) -> f64 {
    let c = c.max(0.0);
    if p == 1.0 {
        c
    } else if p == 2.0 {
        libm::sqrt(c)
    } else {
        libm::pow(c, 1.0 / p)
    }
}

pub(crate) fn check_order(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange { name: "p", value: p, expected: "[1, inf)" });
    }
    Ok(())
}

/// Checks shapes, signs and equality of totals; returns the common total.
pub(crate) fn check_masses(alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<f64> {
    let n = space.len();
    if alpha.len() != n || beta.len() != n {
        return Err(Error::Invalid(alloc::format!(
            "mass vectors must have {n} entries (got {} and {})",
            alpha.len(),
            beta.len()
        )));
    }
    for (index, &m) in alpha.iter().chain(beta).enumerate() {
        if !m.is_finite() {
            return Err(Error::NonFinite { what: "mass", index: index % n });
        }
        if m < 0.0 {
            return Err(Error::NegativeValue { index: index % n, value: m });
        }
    }
    let ta: f64 = alpha.iter().sum();
    let tb: f64 = beta.iter().sum();
    if libm::fabs(ta - tb) > 1e-10 * ta.max(tb).max(1.0) {
        return Err(Error::MassMismatch { source: ta, target: tb });
    }
    Ok(0.5 * (ta + tb))
}

/// W_p with the exact solver for the space: CDF formula (lines, p = 1),
/// quantile coupling (lines) or shift minimization (circle).
pub fn wasserstein(p: f64, alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<TransportResult> {
    if space.is_circle() {
        wp_circle(p, alpha, beta, space)
    } else if p == 1.0 {
        w1_line(alpha, beta, space)
    } else {
        wp_quantile_line(p, alpha, beta, space)
    }
}

/// W_p(fμ, μ) as transport between f·w and w.
pub fn wasserstein_to_reference(f: &Density, p: f64) -> Result<TransportResult> {
    let space = f.space();
    wasserstein(p, &f.node_masses(), space.quad_weights(), space)
}
