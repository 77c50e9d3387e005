//! Both sides of each inequality, packaged as [`InequalityReport`]s.

use alloc::vec::Vec;

mod classical;
mod elementary;
mod entropy;
mod gaussian;
mod pointwise;
mod report;
mod search;

pub use crate::transport::duality_gap_check;
pub use classical::{
    check_hll_general, check_hll_sqrt2, check_orlicz, check_thm1_finite_n, check_thm1_infty, check_weak_type,
    HLL_TOL,
};
pub use elementary::{seq_bound_constant, seq_bound_ratios, SETTLE_TOL};
pub use entropy::{check_entropy_decay, check_entropy_regularization, EntropyMode, ENTROPY_TOL};
pub use gaussian::{
    check_gaussian_weak, lemma_gaussian_check, lemma_kq, mehler_time_factor, GAUSSIAN_TOL, MIN_GAUSSIAN_LEVEL,
};
pub use pointwise::{
    check_gradient_bound, check_harnack, check_log_harnack, check_reverse_isoperimetry, gradient_bound_profile,
    GRADIENT_BOUND_FACTOR, POINTWISE_TOL,
};
pub use report::{ratio_of, InequalityReport, Verdict};
pub use search::{constant_search, ConstantSearch};

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let step = libm::log(hi / lo) / (n - 1) as f64;
            (0..n).map(|k| if k + 1 == n { hi } else { lo * libm::exp(step * k as f64) }).collect()
        }
    }
}

/// The 60-point geometric grid on [1e-3, 10] used for infima over t.
pub fn default_t_grid() -> Vec<f64> {
    geometric_grid(1e-3, 10.0, 60)
}
