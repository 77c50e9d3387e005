//! Checks whose two sides are built from ‖∇f‖, W_p(fμ, μ) and norms of f.

use alloc::vec::Vec;

use super::InequalityReport;
use crate::calculus::{gradient, lp_norm, orlicz_functional, weak_type_functional};
use crate::error::{Error, Result};
use crate::measure::Density;
use crate::params::InequalityParams;
use crate::transport::wasserstein_to_reference;

pub const HLL_TOL: f64 = 1e-3;

pub(crate) fn gradient_norm(f: &Density, q: f64) -> Result<f64> {
    lp_norm(&gradient(f.values(), f.space()), q, f.space())
}

fn deviation(f: &Density) -> Vec<f64> {
    f.values().iter().map(|v| v - 1.0).collect()
}

fn check_q_range(q: f64) -> Result<()> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::OutOfRange { name: "q", value: q, expected: "(1, 2]" });
    }
    Ok(())
}

fn hll_sides(f: &Density) -> Result<(f64, f64)> {
    let l1 = lp_norm(&deviation(f), 1.0, f.space())?;
    let rhs = gradient_norm(f, 1.0)? * wasserstein_to_reference(f, 1.0)?.value;
    Ok((l1 * l1, rhs))
}

/// ‖f − 1‖₁² ≤ 2‖∇f‖₁ W₁(fμ, μ).
pub fn check_hll_sqrt2(f: &Density) -> Result<InequalityReport> {
    let (lhs, rhs) = hll_sides(f)?;
    let params = InequalityParams { p: 1.0, q: 1.0, ..Default::default() };
    Ok(InequalityReport::explicit("hll_sqrt2", lhs, 2.0 * rhs, HLL_TOL, params, f.space().len()))
}

/// ‖f − 1‖₁² against ‖∇f‖₁ W₁(fμ, μ) with constant 1; the ratio estimates C.
pub fn check_hll_general(f: &Density) -> Result<InequalityReport> {
    let (lhs, rhs) = hll_sides(f)?;
    let params = InequalityParams { p: 1.0, q: 1.0, ..Default::default() };
    Ok(InequalityReport::constant_free("hll_general", lhs, rhs, params, f.space().len()))
}

/// Finite dimension: ‖f − 1‖_r^θ against ‖∇f‖_q W_p + (‖∇f‖₁W₁)^{θ/(2r)}.
/// For p = q = 1 the one-term form ‖f − 1‖_{1+2/N}^{2+1/N} against ‖∇f‖₁W₁ is used.
pub fn check_thm1_finite_n(f: &Density, p: f64, q: f64, n_dim: f64) -> Result<InequalityReport> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::OutOfRange { name: "p, q", value: p.min(q), expected: ">= 1" });
    }
    if !(n_dim >= 1.0) || !n_dim.is_finite() {
        return Err(Error::OutOfRange { name: "N", value: n_dim, expected: "[1, inf)" });
    }
    let space = f.space();
    let dev = deviation(f);
    let grad1 = gradient_norm(f, 1.0)?;
    let w1 = wasserstein_to_reference(f, 1.0)?.value;
    let mut params = InequalityParams::finite_dimension(p, q, n_dim);
    let (lhs, rhs) = if p == 1.0 && q == 1.0 {
        let r = 1.0 + 2.0 / n_dim;
        let theta = 2.0 + 1.0 / n_dim;
        params.r = r;
        params.theta = theta;
        (libm::pow(lp_norm(&dev, r, space)?, theta), grad1 * w1)
    } else {
        let (theta, r) = (params.theta, params.r);
        let wp = wasserstein_to_reference(f, p)?.value;
        let lhs = libm::pow(lp_norm(&dev, r, space)?, theta);
        (lhs, gradient_norm(f, q)? * wp + libm::pow(grad1 * w1, theta / (2.0 * r)))
    };
    Ok(InequalityReport::constant_free("thm1_finite_n", lhs, rhs, params, space.len()))
}

/// Infinite dimension: ‖f − 1‖_{3q/(q+2)}^{3/2} against
/// ‖∇f‖_q W₂ + (‖∇f‖₁W₁)^{(q+2)/(4q)}.
pub fn check_thm1_infty(f: &Density, q: f64) -> Result<InequalityReport> {
    check_q_range(q)?;
    let space = f.space();
    let params = InequalityParams::infinite_dimension(q);
    let lhs = libm::pow(lp_norm(&deviation(f), params.r, space)?, 1.5);
    let w2 = wasserstein_to_reference(f, 2.0)?.value;
    let w1 = wasserstein_to_reference(f, 1.0)?.value;
    let rhs = gradient_norm(f, q)? * w2 + libm::pow(gradient_norm(f, 1.0)? * w1, (q + 2.0) / (4.0 * q));
    Ok(InequalityReport::constant_free("thm1_infty", lhs, rhs, params, space.len()))
}

/// sup_{u ≥ C} u^{3/2}(ln u)^{1/2} μ(f ≥ u)^{(q+2)/(2q)} against ‖∇f‖_q W₂.
pub fn check_weak_type(f: &Density, q: f64, c_level: f64) -> Result<InequalityReport> {
    if !(1.0..=2.0).contains(&q) {
        return Err(Error::OutOfRange { name: "q", value: q, expected: "[1, 2]" });
    }
    let lhs = weak_type_functional(f, c_level, q)?;
    let rhs = gradient_norm(f, q)? * wasserstein_to_reference(f, 2.0)?.value;
    let params = InequalityParams::infinite_dimension(q).with_c_level(c_level);
    Ok(InequalityReport::constant_free("weak_type", lhs, rhs, params, f.space().len()))
}

/// ∫(f − C)₊^r (ln[1 + (f − C)₊])^α dμ against (‖∇f‖_q W₂)^s.
pub fn check_orlicz(f: &Density, q: f64, c_level: f64) -> Result<InequalityReport> {
    check_q_range(q)?;
    let params = InequalityParams::infinite_dimension(q).with_c_level(c_level);
    let lhs = orlicz_functional(f, c_level, params.r, params.alpha)?;
    let base = gradient_norm(f, q)? * wasserstein_to_reference(f, 2.0)?.value;
    let rhs = libm::pow(base, params.s);
    Ok(InequalityReport::constant_free("orlicz", lhs, rhs, params, f.space().len()))
}
