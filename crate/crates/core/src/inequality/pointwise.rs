//! Pointwise semigroup inequalities: Harnack, log-Harnack, the reverse
//! isoperimetric bound and the gradient estimate.

use alloc::vec::Vec;

use super::{InequalityReport, Verdict};
use crate::calculus::gradient;
use crate::error::{Error, Result};
use crate::params::InequalityParams;
use crate::semigroup::SemigroupOperator;
use crate::special::isoperimetric_profile;

pub const POINTWISE_TOL: f64 = 1e-6;
/// Allowed growth of the gradient constant over the t-grid relative to t = 1.
pub const GRADIENT_BOUND_FACTOR: f64 = 10.0;

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::OutOfRange { name: "node index", value: i as f64, expected: "< n" });
    }
    Ok(())
}

fn check_len(v: &[f64], op: &SemigroupOperator) -> Result<()> {
    if v.len() != op.space().len() {
        return Err(Error::Invalid(alloc::format!("expected {} values", op.space().len())));
    }
    Ok(())
}

/// (P_t f(y_j))² ≤ P_t(f²)(x_i) e^{d(x_i, y_j)²/(2t)} on the circle.
pub fn check_harnack(op: &SemigroupOperator, f: &[f64], t: f64, i: usize, j: usize) -> Result<InequalityReport> {
    let space = op.space();
    if !space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "circle" });
    }
    check_len(f, op)?;
    check_index(i, f.len())?;
    check_index(j, f.len())?;
    if let Some(index) = f.iter().position(|v| *v < 0.0) {
        return Err(Error::NegativeValue { index, value: f[index] });
    }
    let pf = op.apply(f, t)?;
    let sq: Vec<f64> = f.iter().map(|v| v * v).collect();
    let psq = op.apply(&sq, t)?;
    let d = space.metric(i, j);
    let lhs = pf[j] * pf[j];
    let rhs = psq[i] * libm::exp(d * d / (2.0 * t));
    let params = InequalityParams { t, ..Default::default() };
    Ok(InequalityReport::explicit("harnack", lhs, rhs, POINTWISE_TOL, params, space.len()))
}

fn log_harnack_term(k: f64, rho: f64, t: f64) -> f64 {
    if libm::fabs(k) < 1e-12 {
        rho * rho / (4.0 * t)
    } else {
        k * rho * rho / (-2.0 * libm::expm1(-2.0 * k * t))
    }
}

/// P_t log g(x_i) ≤ log P_t g(y_j) + Kρ²/(2(1 − e^{−2Kt})), with K taken from
/// the space's curvature bound (Ric ≥ −K) and the K → 0 limit ρ²/(4t).
///
/// Both sides are reported exponentiated; the slack is the additive one.
pub fn check_log_harnack(op: &SemigroupOperator, g: &[f64], t: f64, i: usize, j: usize) -> Result<InequalityReport> {
    let space = op.space();
    check_len(g, op)?;
    check_index(i, g.len())?;
    check_index(j, g.len())?;
    if let Some(index) = g.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NegativeValue { index, value: g[index] });
    }
    let k = -space.curvature_lower();
    let logs: Vec<f64> = g.iter().map(|v| libm::log(*v)).collect();
    let lhs_log = op.apply(&logs, t)?[i];
    let rhs_log = libm::log(op.apply(g, t)?[j]) + log_harnack_term(k, space.metric(i, j), t);
    let params = InequalityParams { t, k, ..Default::default() };
    Ok(InequalityReport::new(
        "log_harnack",
        libm::exp(lhs_log),
        libm::exp(rhs_log),
        Verdict::Pointwise,
        POINTWISE_TOL,
        params,
        space.len(),
    )
    .with_slack(rhs_log - lhs_log))
}

/// [I(P_t g)]² − [P_t I(g)]² ≥ 2t|∇P_t g|² at every node; the report carries
/// the worst node, lhs being 2t|∇P_t g|² there.
pub fn check_reverse_isoperimetry(op: &SemigroupOperator, g: &[f64], t: f64) -> Result<InequalityReport> {
    let space = op.space();
    check_len(g, op)?;
    if let Some(index) = g.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::OutOfRange { name: "g", value: g[index], expected: "[0, 1]" });
    }
    let profile = |v: f64| isoperimetric_profile(v.clamp(0.0, 1.0));
    let pg = op.apply(g, t)?;
    let ig = g.iter().map(|v| profile(*v)).collect::<Result<Vec<f64>>>()?;
    let pig = op.apply(&ig, t)?;
    let grad = gradient(&pg, space);
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    for k in 0..g.len() {
        let i_pg = profile(pg[k])?;
        let rhs = i_pg * i_pg - pig[k] * pig[k];
        let lhs = 2.0 * t * grad[k] * grad[k];
        if rhs - lhs < worst.0 {
            worst = (rhs - lhs, lhs, rhs);
        }
    }
    let params = InequalityParams { t, ..Default::default() };
    Ok(InequalityReport::new(
        "reverse_isoperimetry",
        worst.1,
        worst.2,
        Verdict::Pointwise,
        POINTWISE_TOL,
        params,
        space.len(),
    )
    .with_slack(worst.0))
}

/// c*(t) = max_i |∇P_t h|(x_i) √(t∧1) / (P_t|h|^{q'})(x_i)^{1/q'} for each t.
pub fn gradient_bound_profile(op: &SemigroupOperator, h: &[f64], t_grid: &[f64], q_dual: f64) -> Result<Vec<f64>> {
    check_len(h, op)?;
    if !(q_dual >= 1.0) || !q_dual.is_finite() {
        return Err(Error::OutOfRange { name: "q'", value: q_dual, expected: "[1, inf)" });
    }
    if h.iter().all(|v| *v == 0.0) {
        return Err(Error::Invalid("gradient bound is undefined for h = 0".into()));
    }
    let space = op.space();
    let powered: Vec<f64> = h.iter().map(|v| libm::pow(libm::fabs(*v), q_dual)).collect();
    t_grid
        .iter()
        .map(|&t| {
            let ph = op.apply(h, t)?;
            let grad = gradient(&ph, space);
            let den = op.apply(&powered, t)?;
            let floor = 1e-14 * den.iter().copied().fold(0.0, f64::max);
            let scale = libm::sqrt(t.min(1.0));
            Ok(grad
                .iter()
                .zip(&den)
                .filter(|(_, d)| **d > floor)
                .map(|(g, d)| libm::fabs(*g) * scale / libm::pow(*d, 1.0 / q_dual))
                .fold(0.0, f64::max))
        })
        .collect()
}

/// sup over the t-grid of c*(t) against 10·c*(1).
pub fn check_gradient_bound(op: &SemigroupOperator, h: &[f64], t_grid: &[f64], q_dual: f64) -> Result<InequalityReport> {
    if t_grid.is_empty() {
        return Err(Error::Invalid("empty t-grid".into()));
    }
    let profile = gradient_bound_profile(op, h, t_grid, q_dual)?;
    let at_one = gradient_bound_profile(op, h, &[1.0], q_dual)?[0];
    let sup = profile.iter().copied().fold(0.0, f64::max);
    let rhs = GRADIENT_BOUND_FACTOR * at_one;
    let params = InequalityParams { q: q_dual / (q_dual - 1.0), ..Default::default() };
    Ok(InequalityReport::new("gradient_bound", sup, rhs, Verdict::Pointwise, 0.0, params, op.space().len()))
}
