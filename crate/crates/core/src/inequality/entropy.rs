use super::InequalityReport;
use crate::calculus::{entropy, entropy_of};
use crate::error::{Error, Result};
use crate::measure::{same_space, Density};
use crate::params::InequalityParams;
use crate::semigroup::SemigroupOperator;
use crate::space::SpaceKind;
use crate::transport::wasserstein_to_reference;

pub const ENTROPY_TOL: f64 = 1e-3;

/// Which entropy–transport bound to compare against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyMode {
    /// Nonnegative curvature: Ent(P_t f) ≤ W₂²/(4t).
    CurvatureZero,
    /// Ric ≥ −K with K > 0: Ent(P_t f) ≤ K W₂² / (2(1 − e^{−2Kt})). Reported only.
    NegativeCurvature(f64),
    /// Gaussian line: Ent(T_t f) ≤ W₂²/(e^{2t} − 1).
    Gaussian,
}

pub(crate) fn check_operator(op: &SemigroupOperator, f: &Density) -> Result<()> {
    if !same_space(op.space(), f.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

pub fn check_entropy_regularization(
    op: &SemigroupOperator,
    f: &Density,
    t: f64,
    mode: EntropyMode,
) -> Result<InequalityReport> {
    check_operator(op, f)?;
    let space = f.space();
    match mode {
        EntropyMode::CurvatureZero if space.curvature_lower() < 0.0 => {
            return Err(Error::WrongSpaceKind { expected: "a space with nonnegative curvature" })
        }
        EntropyMode::Gaussian if space.kind() != SpaceKind::GaussLine => {
            return Err(Error::WrongSpaceKind { expected: "gauss_line" })
        }
        EntropyMode::NegativeCurvature(k) if !(k > 0.0) || space.curvature_lower() < -k => {
            return Err(Error::OutOfRange { name: "K", value: k, expected: "> 0 and >= -curvature_lower" })
        }
        _ => {}
    }
    let lhs = entropy_of(&op.apply(f.values(), t)?, space);
    let w2sq = wasserstein_to_reference(f, 2.0)?.cost();
    let params = InequalityParams { p: 2.0, t, ..Default::default() };
    Ok(match mode {
        EntropyMode::CurvatureZero => InequalityReport::explicit(
            "entropy_regularization_cd0",
            lhs,
            w2sq / (4.0 * t),
            ENTROPY_TOL,
            params.with_k(0.0),
            space.len(),
        ),
        EntropyMode::Gaussian => InequalityReport::explicit(
            "entropy_regularization_gauss",
            lhs,
            w2sq / libm::expm1(2.0 * t),
            ENTROPY_TOL,
            params.with_k(-1.0),
            space.len(),
        ),
        EntropyMode::NegativeCurvature(k) => InequalityReport::constant_free(
            "entropy_regularization_negk",
            lhs,
            k * w2sq / (-2.0 * libm::expm1(-2.0 * k * t)),
            params.with_k(k),
            space.len(),
        ),
    })
}

/// Ent(P_t f) against e^{−λt} Ent(f); λ is the caller's log-Sobolev proxy.
pub fn check_entropy_decay(op: &SemigroupOperator, f: &Density, t: f64, lambda: f64) -> Result<InequalityReport> {
    check_operator(op, f)?;
    let lhs = entropy_of(&op.apply(f.values(), t)?, f.space());
    let rhs = libm::exp(-lambda * t) * entropy(f);
    let params = InequalityParams { t, lambda, ..Default::default() };
    Ok(InequalityReport::constant_free("entropy_decay", lhs, rhs, params, f.space().len()))
}
