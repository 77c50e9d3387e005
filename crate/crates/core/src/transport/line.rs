use alloc::vec::Vec;

use super::{check_masses, check_order, pow_p, root_p, Method, Plan, TransportResult};
use crate::error::{Error, Result};
use crate::space::Space1D;

fn require_line(space: &Space1D) -> Result<()> {
    if space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "line" });
    }
    Ok(())
}

/// W₁ = ∫|F_α − F_β| dx from cumulative sums.
pub fn w1_line(alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<TransportResult> {
    require_line(space)?;
    check_masses(alpha, beta, space)?;
    let x = space.nodes();
    let mut diff = 0.0;
    let mut value = 0.0;
    for i in 0..x.len() - 1 {
        diff += alpha[i] - beta[i];
        value += libm::fabs(diff) * (x[i + 1] - x[i]);
    }
    Ok(TransportResult::exact(value, 1.0, Method::CdfLine, None))
}

/// Walks the monotone (quantile) coupling of two measures on sorted
/// positions, calling `visit(i, j, mass)` for every transported chunk.
pub(crate) fn monotone_coupling(alpha: &[f64], beta: &[f64], mut visit: impl FnMut(usize, usize, f64)) {
    let n = alpha.len();
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (alpha[0], beta[0]);
    while i < n && j < n {
        if ra < rb {
            if ra > 0.0 {
                visit(i, j, ra);
            }
            rb -= ra;
            i += 1;
            ra = if i < n { alpha[i] } else { 0.0 };
        } else {
            if rb > 0.0 {
                visit(i, j, rb);
            }
            ra -= rb;
            j += 1;
            rb = if j < n { beta[j] } else { 0.0 };
        }
    }
}

/// W_p from the monotone coupling, which is optimal on the line for p ≥ 1.
pub fn wp_quantile_line(p: f64, alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<TransportResult> {
    require_line(space)?;
    check_order(p)?;
    check_masses(alpha, beta, space)?;
    let x = space.nodes();
    let mut cost = 0.0;
    let mut entries = Vec::new();
    monotone_coupling(alpha, beta, |i, j, m| {
        cost += m * pow_p(libm::fabs(x[i] - x[j]), p);
        entries.push((i, j, m));
    });
    let plan = Plan { n: x.len(), entries };
    Ok(TransportResult::exact(root_p(cost, p), p, Method::QuantileLine, Some(plan)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_weighted_line, potentials};

    fn unit_line(n: usize) -> alloc::sync::Arc<Space1D> {
        // nodes at 0, 0.5, 1, ... when L = (n-1)/4
        build_weighted_line(n, (n - 1) as f64 / 4.0, potentials::flat, 0.0).unwrap()
    }

    #[test]
    fn point_masses() {
        let s = unit_line(5); // nodes -1, -0.5, 0, 0.5, 1
        let a = [0.0, 0.0, 1.0, 0.0, 0.0];
        let b = [0.0, 0.0, 0.0, 0.0, 1.0];
        assert!((w1_line(&a, &b, &s).unwrap().value - 1.0).abs() < 1e-15);
        assert_eq!(w1_line(&a, &a, &s).unwrap().value, 0.0);
        let r = wp_quantile_line(2.0, &a, &b, &s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn split_versus_midpoint() {
        let s = unit_line(5);
        let a = [0.0, 0.0, 0.5, 0.0, 0.5];
        let b = [0.0, 0.0, 0.0, 1.0, 0.0];
        assert!((w1_line(&a, &b, &s).unwrap().value - 0.5).abs() < 1e-15);
        assert!((wp_quantile_line(2.0, &a, &b, &s).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_unequal_totals() {
        let s = unit_line(5);
        let a = [0.2; 5];
        let b = [0.3; 5];
        assert!(matches!(w1_line(&a, &b, &s), Err(Error::MassMismatch { .. })));
        assert!(wp_quantile_line(0.5, &a, &a, &s).is_err());
    }

    #[test]
    fn quantile_plan_has_exact_marginals() {
        let s = unit_line(9);
        let a = [0.1, 0.0, 0.3, 0.05, 0.05, 0.2, 0.1, 0.1, 0.1];
        let b = [0.0, 0.25, 0.25, 0.0, 0.1, 0.1, 0.1, 0.1, 0.1];
        let r = wp_quantile_line(1.5, &a, &b, &s).unwrap();
        let plan = r.plan.unwrap();
        for (x, y) in plan.row_sums().iter().zip(&a) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in plan.col_sums().iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(plan.entries.iter().all(|e| e.2 > 0.0));
    }
}
