use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Successive values that must agree for the ratio sequence to count as settled.
pub const SETTLE_TOL: f64 = 1e-6;

/// R_k = Σ_{i≤k} (1+i)^α a^i / ((1+k)^α a^k) for k = 0..=k_max, through the
/// recurrence R_k = 1 + R_{k−1} (k/(k+1))^α / a, which never overflows.
pub fn seq_bound_ratios(a: f64, alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::OutOfRange { name: "a", value: a, expected: "> 1" });
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: "> 0" });
    }
    let mut out = Vec::with_capacity(k_max + 1);
    let mut r = 1.0;
    out.push(r);
    for k in 1..=k_max {
        r = 1.0 + r * libm::pow(k as f64 / (k + 1) as f64, alpha) / a;
        out.push(r);
    }
    Ok(out)
}

/// Smallest C with Σ_{i≤k} (1+i)^α a^i ≤ C (1+k)^α a^k for all k ≤ k_max.
///
/// Fails with [`Error::SequenceNotSettled`] unless the last two ratios agree
/// within [`SETTLE_TOL`], i.e. unless the sequence visibly converges.
pub fn seq_bound_constant(a: f64, alpha: f64, k_max: usize) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::OutOfRange { name: "k_max", value: 0.0, expected: ">= 1" });
    }
    let ratios = seq_bound_ratios(a, alpha, k_max)?;
    let last_difference = libm::fabs(ratios[k_max] - ratios[k_max - 1]);
    if !(last_difference <= SETTLE_TOL) {
        return Err(Error::SequenceNotSettled { k_max, last_difference, bound: SETTLE_TOL });
    }
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_match_direct_summation() {
        let (a, alpha) = (1.5, 2.0);
        let ratios = seq_bound_ratios(a, alpha, 40).unwrap();
        for (k, r) in ratios.iter().enumerate() {
            let sum: f64 = (0..=k).map(|i| libm::pow((1 + i) as f64, alpha) * libm::pow(a, i as f64)).sum();
            let direct = sum / (libm::pow((1 + k) as f64, alpha) * libm::pow(a, k as f64));
            assert!((r - direct).abs() < 1e-12 * direct);
        }
        assert_eq!(ratios[0], 1.0);
        assert!(ratios.iter().all(|&r| r >= 1.0));
    }

    #[test]
    fn limit_is_a_over_a_minus_one() {
        let r = seq_bound_ratios(4.0, 0.5, 5000).unwrap();
        assert!((r[5000] - 4.0 / 3.0).abs() < 1e-4);
        assert!(seq_bound_ratios(1.0, 1.0, 3).is_err());
        assert!(seq_bound_ratios(2.0, 0.0, 3).is_err());
    }

    #[test]
    fn settles_for_large_k() {
        assert!(seq_bound_constant(2.0, 1.0, 5000).unwrap() >= 1.0);
    }
}
