//! Checks specific to the Gaussian line and the Ornstein–Uhlenbeck semigroup.

use alloc::vec::Vec;

use super::classical::gradient_norm;
use super::entropy::check_operator;
use super::InequalityReport;
use crate::calculus::lp_norm;
use crate::error::{Error, Result};
use crate::measure::{tail_prob, Density};
use crate::params::InequalityParams;
use crate::semigroup::SemigroupOperator;
use crate::space::SpaceKind;
use crate::special::normal_abs_moment;
use crate::transport::wasserstein_to_reference;

pub const GAUSSIAN_TOL: f64 = 1e-3;
/// Smallest level accepted by the Gaussian weak-type bound.
pub const MIN_GAUSSIAN_LEVEL: f64 = 8.0;

/// K_q = (E|Z|^q)^{1/q} for a standard normal Z.
pub fn lemma_kq(q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::OutOfRange { name: "q", value: q, expected: "[1, inf)" });
    }
    Ok(libm::pow(normal_abs_moment(q), 1.0 / q))
}

/// c_t = ∫₀ᵗ e^{-s}/√(1 − e^{-2s}) ds = arccos(e^{-t}).
pub fn mehler_time_factor(t: f64) -> f64 {
    libm::acos(libm::exp(-t))
}

fn require_gauss_line(f: &Density) -> Result<()> {
    if f.space().kind() != SpaceKind::GaussLine {
        return Err(Error::WrongSpaceKind { expected: "gauss_line" });
    }
    Ok(())
}

/// ‖T_t f − f‖_q ≤ K_q arccos(e^{-t}) ‖∇f‖_q.
pub fn lemma_gaussian_check(op: &SemigroupOperator, f: &Density, q: f64, t: f64) -> Result<InequalityReport> {
    require_gauss_line(f)?;
    check_operator(op, f)?;
    let kq = lemma_kq(q)?;
    let moved = op.apply(f.values(), t)?;
    let diff: Vec<f64> = moved.iter().zip(f.values()).map(|(a, b)| a - b).collect();
    let lhs = lp_norm(&diff, q, f.space())?;
    let rhs = kq * mehler_time_factor(t) * gradient_norm(f, q)?;
    let params = InequalityParams { q, t, ..Default::default() };
    Ok(InequalityReport::explicit("lemma_gaussian", lhs, rhs, GAUSSIAN_TOL, params, f.space().len()))
}

/// γ(f ≥ 2u) ≤ min over the t-grid of
/// K_q^q arccos^q(e^{-t}) ‖∇f‖_q^q / u^q + 2W₂² / ((e^{2t} − 1) u ln u).
pub fn check_gaussian_weak(f: &Density, q: f64, u: f64, t_grid: &[f64]) -> Result<InequalityReport> {
    require_gauss_line(f)?;
    if !(u >= MIN_GAUSSIAN_LEVEL) {
        return Err(Error::OutOfRange { name: "u", value: u, expected: ">= 8" });
    }
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Invalid("t-grid must be nonempty and positive".into()));
    }
    let kq_q = libm::pow(lemma_kq(q)?, q);
    let grad_q = libm::pow(gradient_norm(f, q)?, q);
    let w2sq = wasserstein_to_reference(f, 2.0)?.cost();
    let (rhs, t_best) = t_grid
        .iter()
        .map(|&t| {
            let sobolev = kq_q * libm::pow(mehler_time_factor(t), q) * grad_q / libm::pow(u, q);
            let entropic = 2.0 * w2sq / (libm::expm1(2.0 * t) * u * libm::log(u));
            (sobolev + entropic, t)
        })
        .fold((f64::INFINITY, f64::NAN), |best, cur| if cur.0 < best.0 { cur } else { best });
    let lhs = tail_prob(f, 2.0 * u);
    let params = InequalityParams { q, u, t: t_best, ..Default::default() };
    Ok(InequalityReport::explicit("gaussian_weak", lhs, rhs, GAUSSIAN_TOL, params, f.space().len()))
}
